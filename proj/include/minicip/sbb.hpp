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

#ifndef MINICIP_SBB_HPP
#define MINICIP_SBB_HPP

#include "minicip/lp.hpp"
#include "minicip/relax.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace minicip
{

enum class SolveStatus
{
   kOptimal,
   kInfeasible,
   kGapLimit,
   kNodeLimit,
   kTimeLimit
};

struct SolveParams
{
   double gapRel = 1e-4;
   double gapAbs = 1e-6;
   long nodeLimit = 100000;
   double timeLimit = infinity; // seconds
   int maxCutsPerRound = 8;
   int fbbtRounds = 5;
   unsigned seed = 0;
   std::ostream* log = nullptr;
};

struct SolveResult
{
   SolveStatus status = SolveStatus::kInfeasible;
   /// original-variable vector; NONE while no feasible point is known
   std::optional<std::vector<double>> incumbent;
   double primalBound = infinity;
   double dualBound = -infinity;
   long nodesProcessed = 0;
   long lpIterations = 0;
   double seconds = 0.0;
};

/** Branch-and-bound node.
 *
 *  The box covers original, slack, and auxiliary variables and is always
 *  contained in the root box. Cuts are estimator cuts derived under an
 *  ancestor box, hence valid throughout this subtree but not globally.
 */
struct Node
{
   std::vector<Interval> box;
   int depth = 0;
   double parentDual = -infinity;
   std::vector<Cut> cuts;
   long seq = 0;
};

struct Branching
{
   int var = -1;
   double point = 0.0;
};

/// per-row violations of a point against the ORIGINAL instance
struct ViolationReport
{
   std::vector<double> linViolation;
   std::vector<double> nlViolation;
   std::vector<double> boundViolation;
   std::vector<double> intViolation;
   double maxViolation = 0.0;
};

/// tightens the box in place; false signals node infeasibility
using Propagator = std::function<bool(
    const Instance&, const ExtendedForm&, std::vector<Interval>& )>;

using Separator = std::function<std::vector<Cut>(
    const Instance&, const ExtendedForm&, const std::vector<Interval>&,
    const std::vector<double>& )>;

/// returns a candidate point over the original variables
using HeuristicFn = std::function<std::optional<std::vector<double>>(
    const Instance&, const ExtendedForm&, const std::vector<Interval>&,
    const std::vector<double>& )>;

using BranchingSelector = std::function<std::optional<Branching>(
    const Instance&, const ExtendedForm&, const std::vector<Interval>&,
    const std::vector<double>& )>;

using CutSelector =
    std::function<std::vector<int>( const std::vector<Cut>&, int )>;

struct Heuristic
{
   std::string name;
   bool rootOnly = true;
   HeuristicFn fn;
};

/** Plugin lists invoked in deterministic order; every plugin only sees the
 *  node-local state it is handed. */
struct PluginRegistry
{
   std::vector<Propagator> propagators;
   std::vector<Separator> separators;
   std::vector<Heuristic> heuristics;
   std::vector<BranchingSelector> branchingSelectors;
   CutSelector cutSelector;
};

/// feasibility-based bound tightening, estimator separation, default
/// branching and cut selection
PluginRegistry defaultRegistry();

/** One pass of feasibility-based bound tightening: integral rounding,
 *  linear row activity bounds, forward-backward interval propagation over
 *  extended rows. Returns false when some domain becomes empty. */
bool
fbbtRound( const Instance& instance, const ExtendedForm& ext,
           std::vector<Interval>& box );

/** Violations of the point against original rows, bounds, and integrality.
 *  A domain error inside an expression counts as infinite violation. */
ViolationReport
checkOriginalFeasibility( const Instance& instance,
                          std::span<const double> point );

/** Picks the branching variable and point for a node.
 *
 *  Fractional original integers win by most-fractional score; otherwise
 *  original variables of violated nonlinear rows are taken widest first,
 *  continuous before integral. Auxiliary and slack variables are never
 *  returned. The branch point is the LP value clamped to
 *  [lo + 0.2 width, hi - 0.2 width]. NONE signals the node is
 *  feasible-or-converged. */
std::optional<Branching>
selectBranching( const Instance& instance, const ExtendedForm& ext,
                 const std::vector<Interval>& box,
                 const std::vector<double>& lpSolution );

SolveResult
solve( const Instance& instance, const SolveParams& params,
       const PluginRegistry& registry );

SolveResult
solve( const Instance& instance, const SolveParams& params = {} );

} // namespace minicip

#endif
