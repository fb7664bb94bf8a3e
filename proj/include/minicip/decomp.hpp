/* * * * * * * * * * * * * * * * * * * * * * * * * * * * * * * * * * * * * * */
/*                                                                           */
/*               This file is part of the program and library                */
/*        MiniCIP --- a mini constraint integer programming solver           */
/*                                                                           */
/* Copyright (C) 2026 MiniCIP developers                                     */
/*                                                                           */
/* Licensed under the Apache License, Version 2.0 (the "License");           */
/* you may not use this file except in compliance with the License.          */
/* You may obtain a copy of the License at                                   */
/*                                                                           */
/*     http://www.apache.org/licenses/LICENSE-2.0                            */
/*                                                                           */
/* Unless required by applicable law or agreed to in writing, software       */
/* distributed under the License is distributed on an "AS IS" BASIS,         */
/* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.  */
/* See the License for the specific language governing permissions and       */
/* limitations under the License.                                            */
/*                                                                           */
/* * * * * * * * * * * * * * * * * * * * * * * * * * * * * * * * * * * * * * */

#ifndef MINICIP_DECOMP_HPP
#define MINICIP_DECOMP_HPP

#include "minicip/instance.hpp"
#include "minicip/sbb.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace minicip
{

/// label value for linking rows and columns
constexpr int kLinking = -1;

/** Row/column block labels. Row index space is linear rows followed by
 *  nonlinear rows; block labels run 0..k-1.
 */
struct Decomposition
{
   int k = 0;
   std::vector<int> rowLabel;
   std::vector<int> colLabel;

   int
   numRows() const
   {
      return static_cast<int>( rowLabel.size() );
   }
};

struct BlockViolation
{
   int row;
   int col;
};

/// empty result means the block condition holds for every nonzero entry
std::vector<BlockViolation>
validateDecomposition( const Instance& instance, const Decomposition& dec );

/// knobs shared by the penalty alternating direction and partial slack methods
struct DecompParams
{
   int maxIters = 30;             ///< partition updates before giving up
   int maxInner = 25;             ///< alternating sweeps per penalty level
   int maxOuter = 8;              ///< penalty escalations before giving up
   double feasTol = 1e-6;         ///< slack and original-row acceptance tolerance
   bool reverseBlockOrder = false;
   bool parallel = false;         ///< dispatch block subproblems via OpenMP
   std::ostream* log = nullptr;
};

struct DecompResult
{
   bool found = false;
   std::vector<double> x;
   double objective = infinity;
   int iterations = 0;
};

/// snapshot taken after every partition update
struct DpsState
{
   std::vector<std::vector<double>> partition; ///< [block][linking row] share
   std::vector<double> lambda;                 ///< [linking row] slack penalty
   std::vector<std::vector<double>> slack;     ///< [block][linking row] residual
   int iteration = 0;
};

/// snapshot taken after every alternating sweep
struct PadmState
{
   std::vector<std::vector<double>> copies; ///< [block][var], NaN when untouched
   std::vector<double> mu;                  ///< [var] mismatch penalty, 0 off-linking
   int sweep = 0;
   int outer = 0;
};

/** Partition linking row sides across blocks, solve the blocks against their
 *  shares with elastic slacks, and move shares toward blocks that missed
 *  theirs. Linking rows must be one-sided or equalities and linear; every
 *  column must carry a block label.
 */
DecompResult
dps( const Instance& instance, const Decomposition& dec,
     const DecompParams& params = {}, std::vector<DpsState>* trace = nullptr );

/** Give each block a private copy of the linking variables it touches,
 *  penalize deviation from a consensus value, and alternate block solves
 *  until the copies agree. Every row must carry a block label.
 */
DecompResult
padm( const Instance& instance, const Decomposition& dec,
      const DecompParams& params = {}, std::vector<PadmState>* trace = nullptr );

/// re-optimizes from a feasible point; never returns a worse one
std::vector<double>
dpsImprove( const Instance& instance, const Decomposition& dec,
            const std::vector<double>& solution, const DecompParams& params = {} );

/// re-optimizes the blocks with the linking variables pinned at the input point
std::vector<double>
padmImprove( const Instance& instance, const Decomposition& dec,
             const std::vector<double>& solution, const DecompParams& params = {} );

/// wraps dps() as a root node primal heuristic
Heuristic
makeDpsHeuristic( Decomposition dec, DecompParams params = {} );

/// wraps padm() as a root node primal heuristic
Heuristic
makePadmHeuristic( Decomposition dec, DecompParams params = {} );

} // namespace minicip

#endif
