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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "minicip/io.hpp"
#include "minicip/sbb.hpp"

#include <cmath>
#include <random>
#include <sstream>

using namespace minicip;

namespace
{

Instance
loadData( const std::string& file )
{
   return readInstance( std::string( MINICIP_DATA_DIR ) + "/" + file );
}

void
checkGapInvariant( const SolveResult& result )
{
   if( result.status != SolveStatus::kOptimal )
      return;
   REQUIRE( result.incumbent.has_value() );
   REQUIRE( std::fabs( result.primalBound - result.dualBound ) <=
            std::max( 1e-6, 1e-4 * std::fabs( result.primalBound ) ) );
}

/// brute force over all binary assignments; returns NONE when infeasible
std::optional<double>
bruteForceBinary( const Instance& inst )
{
   int n = inst.numVars();
   std::optional<double> best;
   for( int mask = 0; mask < ( 1 << n ); ++mask )
   {
      std::vector<double> x( n );
      for( int j = 0; j < n; ++j )
         x[j] = ( mask >> j ) & 1;
      bool feasible = true;
      for( const LinearRow& row : inst.linRows )
      {
         double act = linearActivity( row, x );
         if( act < row.lhs - 1e-9 || act > row.rhs + 1e-9 )
         {
            feasible = false;
            break;
         }
      }
      if( !feasible )
         continue;
      double obj = inst.objValue( x );
      if( !best || obj < *best )
         best = obj;
   }
   return best;
}

Instance
randomMilp( std::mt19937& rng )
{
   auto roll = [&rng]( int lo, int hi )
   {
      std::uniform_int_distribution<int> die( lo, hi );
      return die( rng );
   };

   Instance inst;
   int n = roll( 2, 8 );
   int m = roll( 1, 6 );
   for( int j = 0; j < n; ++j )
   {
      Variable var;
      var.name = "x" + std::to_string( j + 1 );
      var.lo = 0.0;
      var.hi = 1.0;
      var.integral = true;
      inst.vars.push_back( var );
      inst.obj.push_back( roll( -10, 10 ) );
   }

   std::vector<int> anchor( n );
   for( int j = 0; j < n; ++j )
      anchor[j] = roll( 0, 1 );

   for( int r = 0; r < m; ++r )
   {
      LinearRow row;
      row.name = "r" + std::to_string( r + 1 );
      int act0 = 0;
      for( int j = 0; j < n; ++j )
      {
         int a = roll( -5, 5 );
         if( a == 0 )
            continue;
         row.cols.push_back( j );
         row.vals.push_back( a );
         act0 += a * anchor[j];
      }
      row.rhs = act0 + roll( 0, 3 );
      if( roll( 0, 99 ) < 20 )
         row.lhs = act0 - roll( 0, 3 );
      inst.linRows.push_back( row );
   }

   // a tenth of the instances get a row no binary point can satisfy
   if( roll( 0, 99 ) < 10 && !inst.linRows.empty() )
   {
      LinearRow& row = inst.linRows[0];
      double minAct = 0.0;
      for( double a : row.vals )
         minAct += std::min( a, 0.0 );
      row.lhs = -infinity;
      row.rhs = minAct - 1.0;
   }
   return inst;
}

} // namespace

TEST_CASE( "sbb-knapsack-reaches-the-enumerated-optimum" )
{
   Instance inst = loadData( "knap.inst" );
   SolveResult result = solve( inst );
   REQUIRE( result.status == SolveStatus::kOptimal );
   REQUIRE( result.primalBound == -9.0 );
   checkGapInvariant( result );
   REQUIRE( result.incumbent.has_value() );
   const std::vector<double>& x = *result.incumbent;
   REQUIRE( x[0] == 1.0 );
   REQUIRE( x[1] == 1.0 );
   REQUIRE( x[2] == 0.0 );
   REQUIRE( bruteForceBinary( inst ) == std::optional<double>( -9.0 ) );
}

TEST_CASE( "sbb-pure-lp-instance-solves-at-the-root" )
{
   Instance inst = readInstanceText( "[VARS]\n"
                                     "x 0 3 continuous\n"
                                     "y 0 4 continuous\n"
                                     "[OBJ]\n"
                                     "min -x - 2*y\n"
                                     "[LINEAR]\n"
                                     "r: x + y <= 5\n" );
   LpSolution lp = solveLp( linearRelaxation( inst ) );
   REQUIRE( lp.status == LpStatus::kOptimal );

   SolveResult result = solve( inst );
   REQUIRE( result.status == SolveStatus::kOptimal );
   REQUIRE( result.nodesProcessed == 1 );
   REQUIRE( result.primalBound == lp.obj );
   REQUIRE( result.dualBound == lp.obj );
   REQUIRE( result.incumbent.has_value() );
}

TEST_CASE( "sbb-infeasibility-is-a-status-not-an-error" )
{
   Instance byRows = readInstanceText( "[VARS]\n"
                                       "x 0 1 continuous\n"
                                       "[OBJ]\n"
                                       "min x\n"
                                       "[LINEAR]\n"
                                       "r: x >= 2\n" );
   SolveResult result = solve( byRows );
   REQUIRE( result.status == SolveStatus::kInfeasible );
   REQUIRE( !result.incumbent.has_value() );
   REQUIRE( result.primalBound == infinity );

   Instance byDomain = readInstanceText( "[VARS]\n"
                                         "x -2 -1 continuous\n"
                                         "y 0 1 continuous\n"
                                         "[OBJ]\n"
                                         "min x\n"
                                         "[NONLINEAR]\n"
                                         "n: log(x)*y <= 1\n" );
   SolveResult domainResult = solve( byDomain );
   REQUIRE( domainResult.status == SolveStatus::kInfeasible );
   REQUIRE( domainResult.nodesProcessed == 0 );
}

TEST_CASE( "sbb-original-feasibility-check-examples" )
{
   Instance inst = readInstanceText( "[VARS]\n"
                                     "x 0 4 continuous\n"
                                     "y 0 4 continuous\n"
                                     "[OBJ]\n"
                                     "min x\n"
                                     "[LINEAR]\n"
                                     "l: x + y <= 1\n"
                                     "[NONLINEAR]\n"
                                     "q: x^2 <= 4\n" );
   {
      std::vector<double> p{ 0.5, 0.5 };
      ViolationReport report = checkOriginalFeasibility( inst, p );
      REQUIRE( report.linViolation[0] == 0.0 );
      REQUIRE( report.nlViolation[0] == 0.0 );
      REQUIRE( report.maxViolation == 0.0 );
   }
   {
      std::vector<double> p{ 3.0, 0.0 };
      ViolationReport report = checkOriginalFeasibility( inst, p );
      REQUIRE( report.nlViolation[0] == 5.0 );
      REQUIRE( report.linViolation[0] == 2.0 );
      REQUIRE( report.maxViolation == 5.0 );
   }
   {
      // bound and integrality violations are reported alongside rows
      Instance intInst = readInstanceText( "[VARS]\n"
                                           "z 0 4 integer\n"
                                           "[OBJ]\n"
                                           "min z\n" );
      std::vector<double> p{ 5.4 };
      ViolationReport report = checkOriginalFeasibility( intInst, p );
      REQUIRE( report.boundViolation[0] == doctest::Approx( 1.4 ) );
      REQUIRE( report.intViolation[0] == doctest::Approx( 0.4 ) );
   }
   {
      // the log-quadratic row evaluates to exactly its side at (e, 1)
      Instance lq = loadData( "logquad.inst" );
      std::vector<double> p{ 2.718281828459045, 1.0 };
      ViolationReport report = checkOriginalFeasibility( lq, p );
      REQUIRE( report.maxViolation <= 1e-12 );
   }
   {
      // a domain error counts as infinite violation
      Instance lg = readInstanceText( "[VARS]\n"
                                      "x -4 4 continuous\n"
                                      "[OBJ]\n"
                                      "min x\n"
                                      "[NONLINEAR]\n"
                                      "n: log(x) <= 2\n" );
      std::vector<double> p{ -1.0 };
      ViolationReport report = checkOriginalFeasibility( lg, p );
      REQUIRE( report.nlViolation[0] == infinity );
   }
}

TEST_CASE( "sbb-branching-prefers-most-fractional-integers" )
{
   Instance inst = loadData( "knap.inst" );
   ExtendedForm ext = buildExtendedFormulation( inst );
   std::vector<Interval> box{ { 0.0, 1.0 }, { 0.0, 1.0 }, { 0.0, 1.0 } };
   std::vector<double> x{ 0.5, 0.9, 0.0 };
   auto branching = selectBranching( inst, ext, box, x );
   REQUIRE( branching.has_value() );
   REQUIRE( branching->var == 0 );
   REQUIRE( branching->point == doctest::Approx( 0.5 ) );

   // integral point with no violated rows means converged
   std::vector<double> integral{ 1.0, 1.0, 0.0 };
   REQUIRE( !selectBranching( inst, ext, box, integral ).has_value() );
}

TEST_CASE( "sbb-branching-picks-the-widest-spatial-variable" )
{
   Instance inst = readInstanceText( "[VARS]\n"
                                     "x 0 4 continuous\n"
                                     "y 0 1 continuous\n"
                                     "[OBJ]\n"
                                     "min -x\n"
                                     "[NONLINEAR]\n"
                                     "b: x*y <= 1\n" );
   ExtendedForm ext = buildExtendedFormulation( inst );
   std::vector<Interval> box;
   for( int j = 0; j < ext.numVars(); ++j )
      box.push_back( Interval{ ext.lo[j], ext.hi[j] } );

   // slack value far from x*y marks the row violated
   std::vector<double> x{ 2.0, 0.5, 5.0 };
   auto branching = selectBranching( inst, ext, box, x );
   REQUIRE( branching.has_value() );
   REQUIRE( branching->var == 0 );
   REQUIRE( branching->point == doctest::Approx( 2.0 ) );

   // branch point clamps into the central 60 percent of the interval
   std::vector<double> nearBound{ 3.96, 0.5, 9.9 };
   auto clamped = selectBranching( inst, ext, box, nearBound );
   REQUIRE( clamped.has_value() );
   REQUIRE( clamped->var == 0 );
   REQUIRE( clamped->point == doctest::Approx( 3.2 ) );
}

TEST_CASE( "sbb-fbbt-tightens-linear-integer-and-nonlinear-bounds" )
{
   Instance inst = readInstanceText( "[VARS]\n"
                                     "x 0 10 integer\n"
                                     "y 0 10 continuous\n"
                                     "[OBJ]\n"
                                     "min x\n"
                                     "[LINEAR]\n"
                                     "r: x + y <= 3\n" );
   ExtendedForm ext = buildExtendedFormulation( inst );
   std::vector<Interval> box{ { 0.4, 10.0 }, { 0.0, 10.0 } };
   REQUIRE( fbbtRound( inst, ext, box ) );
   REQUIRE( box[0].lo == 1.0 );
   REQUIRE( box[0].hi <= 3.0 + 1e-6 );
   REQUIRE( box[1].hi <= 3.0 + 1e-6 );

   Instance quad = readInstanceText( "[VARS]\n"
                                     "x 0 4 continuous\n"
                                     "[OBJ]\n"
                                     "min -x\n"
                                     "[NONLINEAR]\n"
                                     "q: x^2 <= 4\n" );
   ExtendedForm quadExt = buildExtendedFormulation( quad );
   std::vector<Interval> quadBox;
   for( int j = 0; j < quadExt.numVars(); ++j )
      quadBox.push_back( Interval{ quadExt.lo[j], quadExt.hi[j] } );
   REQUIRE( fbbtRound( quad, quadExt, quadBox ) );
   REQUIRE( quadBox[0].hi <= 2.0 + 1e-6 );
   REQUIRE( quadBox[0].hi >= 2.0 - 1e-6 );

   // conflicting linear rows make the round fail
   Instance bad = readInstanceText( "[VARS]\n"
                                    "x 0 1 continuous\n"
                                    "[OBJ]\n"
                                    "min x\n"
                                    "[LINEAR]\n"
                                    "r: x >= 2\n" );
   ExtendedForm badExt = buildExtendedFormulation( bad );
   std::vector<Interval> badBox{ { 0.0, 1.0 } };
   REQUIRE( !fbbtRound( bad, badExt, badBox ) );
}

TEST_CASE( "sbb-exp-constraint-incumbent-satisfies-the-original-row" )
{
   Instance inst = loadData( "expcons.inst" );

   // brute force over the 25 integer pairs with z forced to its minimum
   double bestObj = infinity;
   for( int xv = -2; xv <= 2; ++xv )
      for( int yv = -2; yv <= 2; ++yv )
      {
         double zNeed = std::exp( 7.907755278982137 + xv * yv );
         if( zNeed > 10000.0 )
            continue;
         bestObj = std::min( bestObj, zNeed - xv - yv );
      }
   REQUIRE( bestObj == doctest::Approx( 1000.0 * std::exp( -3.0 ) ) );

   SolveResult result = solve( inst );
   REQUIRE( result.status == SolveStatus::kOptimal );
   checkGapInvariant( result );
   REQUIRE( result.incumbent.has_value() );
   ViolationReport report =
       checkOriginalFeasibility( inst, *result.incumbent );
   REQUIRE( report.maxViolation <= 1e-6 );
   REQUIRE( std::fabs( result.primalBound - bestObj ) <= 1e-6 );
}

TEST_CASE( "sbb-log-quadratic-instance-converges-to-the-boundary" )
{
   Instance inst = loadData( "logquad.inst" );
   SolveResult result = solve( inst );
   REQUIRE( result.status == SolveStatus::kOptimal );
   checkGapInvariant( result );
   REQUIRE( result.incumbent.has_value() );
   ViolationReport report =
       checkOriginalFeasibility( inst, *result.incumbent );
   REQUIRE( report.maxViolation <= 1e-6 );

   // optimum sits at x = e^2, y = 0 on the boundary of the quadratic row
   double e2 = 7.38905609893065;
   REQUIRE( std::fabs( result.primalBound + e2 ) <= 1.1e-3 );
   REQUIRE( result.dualBound <= result.primalBound + 1e-12 );
}

TEST_CASE( "sbb-auxiliary-variables-are-never-branched" )
{
   for( const char* file : { "logquad.inst", "expcons.inst" } )
   {
      Instance inst = loadData( file );
      std::ostringstream log;
      SolveParams params;
      params.log = &log;
      SolveResult result = solve( inst, params );
      REQUIRE( result.status == SolveStatus::kOptimal );

      std::istringstream lines( log.str() );
      std::string word;
      while( lines >> word )
      {
         if( word != "branch" )
            continue;
         long seq;
         std::string kw, name;
         int index;
         lines >> seq >> kw >> name >> kw >> index;
         REQUIRE( index < inst.numVars() );
      }
   }
}

TEST_CASE( "sbb-limits-are-reported-as-statuses" )
{
   Instance inst = loadData( "knap.inst" );

   SolveParams nodeCap;
   nodeCap.nodeLimit = 1;
   SolveResult byNodes = solve( inst, nodeCap );
   REQUIRE( byNodes.status == SolveStatus::kNodeLimit );
   REQUIRE( byNodes.nodesProcessed == 1 );

   SolveParams timeCap;
   timeCap.timeLimit = 0.0;
   SolveResult byTime = solve( inst, timeCap );
   REQUIRE( byTime.status == SolveStatus::kTimeLimit );

   // a loose relative gap stops early without claiming optimality
   SolveParams looseGap;
   looseGap.gapRel = 0.5;
   SolveResult byGap = solve( inst, looseGap );
   REQUIRE( byGap.status == SolveStatus::kGapLimit );
   REQUIRE( byGap.primalBound == -8.0 );
   REQUIRE( byGap.dualBound == doctest::Approx( -32.0 / 3.0 ) );
}

TEST_CASE( "sbb-plugins-extend-the-default-registry" )
{
   Instance inst = loadData( "knap.inst" );

   // a heuristic can hand in the optimum at the root
   PluginRegistry withHeuristic = defaultRegistry();
   withHeuristic.heuristics.push_back( Heuristic{
       "oracle", true,
       []( const Instance&, const ExtendedForm&,
           const std::vector<Interval>&, const std::vector<double>& )
           -> std::optional<std::vector<double>>
       { return std::vector<double>{ 1.0, 1.0, 0.0 }; } } );
   SolveResult heurResult = solve( inst, SolveParams{}, withHeuristic );
   REQUIRE( heurResult.status == SolveStatus::kOptimal );
   REQUIRE( heurResult.primalBound == -9.0 );

   // an extra propagator restricts the search space it sees
   PluginRegistry withPropagator = defaultRegistry();
   withPropagator.propagators.push_back(
       []( const Instance&, const ExtendedForm&,
           std::vector<Interval>& box )
       {
          box[0] = intersect( box[0], Interval{ 0.0, 0.0 } );
          return !box[0].isEmpty();
       } );
   SolveResult propResult = solve( inst, SolveParams{}, withPropagator );
   REQUIRE( propResult.status == SolveStatus::kOptimal );
   REQUIRE( propResult.primalBound == -7.0 );
}

TEST_CASE( "sbb-repeated-solves-are-deterministic" )
{
   for( const char* file : { "knap.inst", "expcons.inst" } )
   {
      Instance inst = loadData( file );
      std::ostringstream logA, logB;
      SolveParams paramsA, paramsB;
      paramsA.log = &logA;
      paramsB.log = &logB;
      SolveResult a = solve( inst, paramsA );
      SolveResult b = solve( inst, paramsB );
      REQUIRE( a.nodesProcessed == b.nodesProcessed );
      REQUIRE( a.lpIterations == b.lpIterations );
      REQUIRE( a.primalBound == b.primalBound );
      REQUIRE( a.dualBound == b.dualBound );
      REQUIRE( a.incumbent == b.incumbent );
      REQUIRE( logA.str() == logB.str() );
   }
}

TEST_CASE( "sbb-random-milps-match-brute-force" )
{
   std::mt19937 rng( 777000111 );
   int optimal = 0;
   int infeasible = 0;
   for( int trial = 0; trial < 110; ++trial )
   {
      Instance inst = randomMilp( rng );
      std::optional<double> oracle = bruteForceBinary( inst );
      SolveResult result = solve( inst );

      if( !oracle )
      {
         REQUIRE( result.status == SolveStatus::kInfeasible );
         ++infeasible;
         continue;
      }
      REQUIRE( result.status == SolveStatus::kOptimal );
      checkGapInvariant( result );
      // integer data makes the optimum an exact double
      REQUIRE( result.primalBound == *oracle );
      REQUIRE( result.dualBound <= *oracle + 1e-9 );
      REQUIRE( result.incumbent.has_value() );
      ViolationReport report =
          checkOriginalFeasibility( inst, *result.incumbent );
      REQUIRE( report.maxViolation <= 1e-6 );
      ++optimal;
   }
   REQUIRE( optimal >= 80 );
   REQUIRE( infeasible >= 5 );
}

TEST_CASE( "sbb-objective-offset-reaches-the-report" )
{
   Instance inst = readInstanceText( "[VARS]\n"
                                     "x 1 3 continuous\n"
                                     "[OBJ]\n"
                                     "min x + 5\n" );
   SolveResult result = solve( inst );
   REQUIRE( result.status == SolveStatus::kOptimal );
   REQUIRE( result.nodesProcessed == 1 );
   REQUIRE( result.primalBound == 6.0 );
   REQUIRE( result.incumbent == std::vector<double>{ 1.0 } );
}
