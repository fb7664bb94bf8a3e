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

#ifndef MINICIP_LP_HPP
#define MINICIP_LP_HPP

#include "minicip/instance.hpp"

#include <vector>

namespace minicip
{

enum class LpStatus
{
   kOptimal,
   kInfeasible,
   kUnbounded,
   kIterationLimit
};

/// nonbasic free columns are pinned at value 0 and reported kAtLower
enum class BasisStatus : uint8_t
{
   kBasic,
   kAtLower,
   kAtUpper
};

struct LpRow
{
   std::vector<int> cols;
   std::vector<double> vals;
   double lhs = -infinity;
   double rhs = infinity;
};

/// min c'x subject to lhs <= Ax <= rhs, lo <= x <= hi
struct LpProblem
{
   std::vector<double> c;
   std::vector<double> lo;
   std::vector<double> hi;
   std::vector<LpRow> rows;

   int
   numCols() const
   {
      return static_cast<int>( c.size() );
   }

   int
   numRows() const
   {
      return static_cast<int>( rows.size() );
   }
};

struct LpSolution
{
   LpStatus status = LpStatus::kIterationLimit;
   double obj = 0.0;
   std::vector<double> x;
   std::vector<double> y;  // row duals; >= 0 when lhs binds, <= 0 at rhs
   std::vector<double> rc; // reduced costs c - A'y
   std::vector<BasisStatus> colBasis;
   std::vector<BasisStatus> rowBasis; // status of the row's slack
   int iterations = 0;
};

LpSolution
solveLp( const LpProblem& problem, int iterationLimit = 20000 );

/// LP relaxation of the linear part of an instance; integrality dropped,
/// nonlinear rows ignored
LpProblem
linearRelaxation( const Instance& instance );

} // namespace minicip

#endif
