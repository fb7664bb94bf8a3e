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

#ifndef MINICIP_REPORT_HPP
#define MINICIP_REPORT_HPP

#include <span>
#include <string>
#include <vector>

namespace minicip
{

/** One benchmark run of one instance. The text form is one line per
 *  instance: name status time nodes iters primal dual. Status values
 *  "optimal" and "infeasible" count as solved; anything else does not.
 */
struct RunRecord
{
   std::string name;
   std::string status = "unknown";
   double time = 0.0;
   long nodes = 0;
   long iters = 0;
   double primal = 0.0;
   double dual = 0.0;
};

std::vector<RunRecord>
parseRunText( const std::string& text, const std::string& where = "<string>" );

std::vector<RunRecord>
readRunFile( const std::string& path );

std::string
formatRunRecord( const RunRecord& record );

/// (prod (v_i + s))^(1/n) - s, computed in log space; throws on empty input
double
shiftedGeometricMean( std::span<const double> values, double shift );

/** Aggregation options. Subset tokens: "all"; "affected" (iteration counts
 *  differ between the two configurations); a number t for the instances
 *  solved by at least one configuration and taking at least t seconds in
 *  at least one; "both-solved"; "diff-timeouts" (solved by exactly one).
 *  An empty subset list selects "all" for one configuration and the full
 *  table for two. Unsolved runs count at the time limit.
 */
struct ReportOptions
{
   double timeLimit = 7200.0;
   std::vector<std::string> subsets;
   std::vector<std::string> labels;
};

/** Renders the subset table for one or two configurations, with solved
 *  counts, shifted geometric mean time (shift 1) and nodes (shift 100),
 *  and for two configurations the ratios of the means. Throws on
 *  mismatched instance sets, unknown subset tokens, or more than two
 *  configurations. Identical inputs produce identical bytes.
 */
std::string
aggregateRuns( const std::vector<std::vector<RunRecord>>& configs,
               const ReportOptions& options = {} );

} // namespace minicip

#endif
