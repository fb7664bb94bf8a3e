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

#ifndef MINICIP_PRESOLVE_HPP
#define MINICIP_PRESOLVE_HPP

#include "minicip/instance.hpp"
#include "minicip/lp.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace minicip
{

enum class ReductionKind : uint8_t
{
   kFixVar,
   kTightenBound,
   kSubstituteVar,
   kDeleteRedundantRow,
   kScaleRow
};

/** One reversible change to the working instance, in original index space.
 *
 *  Field use by kind:
 *    kFixVar           col fixed at value; oldLo/oldHi previous bounds;
 *                      objCoef previous objective entry; hitRows/hitVals
 *                      list the rows holding the column and its coefficient
 *                      there.
 *    kTightenBound     col, upper side flag, value new bound, oldLo/oldHi;
 *                      row and coef identify the deriving row entry;
 *                      rowCols/rowVals store that row for dual recovery.
 *    kSubstituteVar    col := alpha * withCol + beta, derived from equality
 *                      row with entry coef on col; rowCols/rowVals/rowLhs/
 *                      rowRhs store the row; hitRows/hitVals list the other
 *                      rows holding col; objCoef and oldLo/oldHi as above.
 *    kDeleteRedundantRow  row plus its stored cols/vals/sides.
 *    kScaleRow         row scaled by value.
 */
struct Reduction
{
   ReductionKind kind = ReductionKind::kFixVar;
   int col = -1;
   int row = -1;
   int withCol = -1;
   bool upper = false;
   double value = 0.0;
   double oldLo = 0.0;
   double oldHi = 0.0;
   double alpha = 0.0;
   double beta = 0.0;
   double objCoef = 0.0;
   double coef = 0.0;
   double rowLhs = 0.0;
   double rowRhs = 0.0;
   std::vector<int> rowCols;
   std::vector<double> rowVals;
   std::vector<int> hitRows;
   std::vector<double> hitVals;
   std::vector<int> touchedRows;
   std::vector<int> touchedCols;
};

/** Ordered log of applied reductions plus the original-to-reduced index
 *  maps. Replaying the log forward on the original instance reproduces the
 *  reduced instance exactly.
 */
struct PostsolveStack
{
   int originalCols = 0;
   int originalRows = 0; ///< linear rows; nonlinear rows are never deleted
   std::vector<Reduction> log;
   std::vector<int> colMap; ///< original -> reduced, -1 when removed
   std::vector<int> rowMap;
};

struct PresolveParams
{
   int maxRounds = 10;
   bool parallel = false; ///< evaluate presolvers via OpenMP workers
   double tol = 1e-9;
};

struct PresolveStats
{
   int rounds = 0;
   long applied = 0;
   long rejected = 0;
   std::array<long, 5> byKind = { 0, 0, 0, 0, 0 };
};

enum class PresolveStatus
{
   kReduced,
   kInfeasible
};

struct PresolveResult
{
   PresolveStatus status = PresolveStatus::kReduced;
   Instance reduced;
   PostsolveStack stack;
   PresolveStats stats;
   /// set when status is infeasible: the reduction exposing the conflict
   std::optional<Reduction> certificate;
};

/** Runs rounds of the five presolvers. Per round every presolver reads one
 *  immutable snapshot; the returned transactions are applied sequentially
 *  in presolver-priority then index order, and a transaction touching a row
 *  or column modified earlier in the round is rejected and re-derived from
 *  the next snapshot. The outcome does not depend on worker scheduling.
 */
PresolveResult
runPresolve( const Instance& instance, const PresolveParams& params = {} );

/// applies the stack forward to the original instance; equals the reduced
/// instance byte for byte
Instance
replayStack( const Instance& original, const PostsolveStack& stack );

/// maps a reduced-space point back to the original variable space
std::vector<double>
postsolvePrimal( const PostsolveStack& stack,
                 const std::vector<double>& reducedX );

/// row duals, reduced costs, and basis over one index space
struct DualSolution
{
   std::vector<double> y;
   std::vector<double> rc;
   std::vector<BasisStatus> rowBasis;
   std::vector<BasisStatus> colBasis;
};

/** Maps a reduced-space dual solution back to the original space. Deleted
 *  redundant rows come back with a zero multiplier and basic slack; fixed
 *  columns get rc = c - A'y with nonbasic status matching the sign; a
 *  substituted column turns basic with multiplier on its defining row; a
 *  tightened bound that carries weight moves it onto the deriving row and
 *  the bounds of that row's other columns.
 */
DualSolution
postsolveDual( const PostsolveStack& stack, const DualSolution& reduced,
               const std::vector<double>& reducedX );

/// fixed little-endian record layout; identical stacks give identical bytes
void
writePostsolveStack( const std::string& path, const PostsolveStack& stack );

PostsolveStack
readPostsolveStack( const std::string& path );

} // namespace minicip

#endif
