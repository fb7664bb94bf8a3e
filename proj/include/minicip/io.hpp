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

#ifndef MINICIP_IO_HPP
#define MINICIP_IO_HPP

#include "minicip/decomp.hpp"
#include "minicip/instance.hpp"
#include "minicip/symmetry.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace minicip
{

/// parse or io failure anchored to a source line (0 if not line-specific)
class IoError : public std::runtime_error
{
 public:
   IoError( const std::string& where, int line, const std::string& msg )
       : std::runtime_error( line > 0 ? where + ":" +
                                            std::to_string( line ) + ": " + msg
                                      : where + ": " + msg ),
         line( line )
   {
   }
   int line;
};

struct Solution
{
   std::string status = "unknown";
   std::vector<double> x; // empty if there is no incumbent
};

Instance readInstanceText( const std::string& text,
                           const std::string& where = "<string>" );
Instance readInstance( const std::string& path );
std::string writeInstanceText( const Instance& instance );
void writeInstance( const std::string& path, const Instance& instance );

Solution readSolutionText( const std::string& text, const Instance& instance,
                           const std::string& where = "<string>" );
Solution readSolution( const std::string& path, const Instance& instance );
std::string writeSolutionText( const Instance& instance, const Solution& sol );
void writeSolution( const std::string& path, const Instance& instance,
                    const Solution& sol );

/// linear-only MPS subset: ROWS/COLUMNS/RHS/RANGES/BOUNDS with integer markers
Instance readMpsText( const std::string& text,
                      const std::string& where = "<string>" );
Instance readMps( const std::string& path );

/// one permutation per line in 1-based cycle notation, e.g. "(1 2)(3 4)"
std::vector<Permutation> readSymmetryText( const std::string& text, int n,
                                           const std::string& where =
                                               "<string>" );
std::vector<Permutation> readSymmetryFile( const std::string& path, int n );

/** Decomposition file: NBLOCKS k, BLOCK q sections listing row names,
 *  MASTERCONSS for explicit linking rows, LINKINGVARS for forced linking
 *  columns. Unlisted rows are linking; column labels are derived from the
 *  rows each column appears in.
 */
Decomposition readDecompositionText( const std::string& text,
                                     const Instance& instance,
                                     const std::string& where = "<string>" );
Decomposition readDecomposition( const std::string& path,
                                 const Instance& instance );

/// shortest decimal form that parses back to the identical double
std::string formatNumber( double v );

/// 17 significant digits; survives a text round-trip bit-exactly
std::string formatNumberFull( double v );

} // namespace minicip

#endif
