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

/**@file   relax.hpp
 * @brief  Extended formulations, expression structure detection, and linear
 *         under/overestimation of nonlinear terms
 *
 * Nonlinear rows are rewritten into the slack form h_i = w_i where each w_i
 * carries the row sides as bounds. Subexpressions that no estimation routine
 * handles in place are replaced by auxiliary variables with their own
 * defining rows. The original instance is never modified; it stays the
 * reference for feasibility checks.
 */

#ifndef MINICIP_RELAX_HPP
#define MINICIP_RELAX_HPP

#include "minicip/instance.hpp"

#include <optional>
#include <span>
#include <vector>

namespace minicip
{

enum class StructureKind
{
   kLinear,
   kQuadratic,
   kConvex,
   kConcave,
   kBilinear,
   kDefault
};

/** classification of an expression node, priority order
 *  linear > quadratic > convex > concave > bilinear > default */
struct StructureTag
{
   StructureKind kind = StructureKind::kDefault;
   std::vector<int> evidence; // node ids supporting the classification
};

/** Syntactic structure detection.
 *
 *  Convexity follows a composition calculus over the operator tree; sign
 *  conditions (for powers and abs) are decided from interval images over
 *  varBounds. Without varBounds every variable ranges over the entire line.
 */
StructureTag
detectStructure( const ExprDag& dag, int node,
                 std::span<const Interval> varBounds = {} );

enum class VarOrigin
{
   kOriginal,
   kSlack,
   kAuxiliary
};

struct AuxVar
{
   int var;         // extended variable index
   int node;        // defining expression in ExtendedForm::dag
   Interval bounds; // interval image of the defining expression
};

struct ExtRow
{
   int node;     // h_i over original and auxiliary variables
   int slackVar; // w_i
};

/** Slack-variable reformulation of an instance.
 *
 *  Extended variable order: original variables, then one slack per nonlinear
 *  row carrying the row sides as bounds, then auxiliary variables. Row order:
 *  the original nonlinear rows first, then auxiliary defining rows such that
 *  every h_i references only original variables and auxiliaries defined by a
 *  strictly later row. Each auxiliary has exactly one defining row.
 */
struct ExtendedForm
{
   ExprDag dag;
   std::vector<double> lo, hi;
   std::vector<VarOrigin> origin;
   std::vector<AuxVar> auxVars;
   std::vector<ExtRow> rows;
   int numOriginal = 0;
   bool infeasible = false; // an auxiliary received an empty interval image

   int
   numVars() const
   {
      return static_cast<int>( lo.size() );
   }
};

ExtendedForm
buildExtendedFormulation( const Instance& instance );

/** affine function coeff . x + constant bounding an expression from below
 *  (over=false) or above (over=true) on a box */
struct AffineEstimator
{
   std::vector<int> cols;
   std::vector<double> vals;
   double constant = 0.0;
   bool over = false;
};

/** Gradient cuts for convex sides, secants for the opposite side, McCormick
 *  for products; term-wise recursion for mixed sums. Returns nullopt when no
 *  valid linear estimator exists on the box, typically because a needed
 *  bound is infinite.
 */
std::optional<AffineEstimator>
estimateExpression( const ExprDag& dag, int node, const StructureTag& tag,
                    std::span<const Interval> box,
                    std::span<const double> refPoint, bool over );

/** the four envelope pieces of a two-factor product, underestimators first;
 *  pieces whose bounds are infinite are omitted */
std::vector<AffineEstimator>
mcCormickEstimators( const ExprDag& dag, int product,
                     std::span<const Interval> box );

/** one-sided linear cut over extended variables */
struct Cut
{
   std::vector<int> cols;
   std::vector<double> vals;
   double lhs = -infinity;
   double rhs = infinity;
   double efficacy = 0.0;
};

/** turns an estimator of h into a cut linking it to the slack variable
 *  (under: est(x) <= w, over: w <= est(x)); efficacy is the violation at
 *  lpPoint divided by the coefficient norm */
Cut
estimatorCut( const AffineEstimator& est, int slackVar,
              std::span<const double> lpPoint );

/** greedy selection by efficacy with a pairwise parallelism filter: a
 *  candidate whose direction has cosine > 0.9 with a selected cut is
 *  dropped; ties break by candidate index; returns indices in pick order */
std::vector<int>
selectCuts( const std::vector<Cut>& candidates, int maxCuts );

} // namespace minicip

#endif
