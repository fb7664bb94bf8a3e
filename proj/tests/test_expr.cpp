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

#include "minicip/expr.hpp"

#include <cmath>
#include <random>

using namespace minicip;

namespace
{

const std::map<std::string, int> xyVars = { { "x", 0 }, { "y", 1 } };
const std::vector<std::string> xyNames = { "x", "y" };

double
evalAt( const ExprDag& dag, int root, std::initializer_list<double> point )
{
   std::vector<double> x( point );
   return evalExpression( dag, root, x );
}

/// random expression over nvars variables; returns root id
int
randomExpr( ExprDag& dag, std::mt19937& rng, int nvars, int depth )
{
   std::uniform_real_distribution<double> cdist( -4.0, 4.0 );
   std::uniform_int_distribution<int> vdist( 0, nvars - 1 );
   if( depth == 0 )
   {
      if( rng() % 3 == 0 )
         return dag.makeConstant( cdist( rng ) );
      return dag.makeVariable( vdist( rng ) );
   }
   switch( rng() % 8 )
   {
   case 0:
   case 1:
      return dag.makeSum( { randomExpr( dag, rng, nvars, depth - 1 ),
                            randomExpr( dag, rng, nvars, depth - 1 ) },
                          { cdist( rng ), cdist( rng ) }, cdist( rng ) );
   case 2:
   case 3:
      return dag.makeProduct( { randomExpr( dag, rng, nvars, depth - 1 ),
                                randomExpr( dag, rng, nvars, depth - 1 ) } );
   case 4:
   {
      const double exps[] = { -2.0, -1.0, 0.5, 1.5, 2.0, 3.0 };
      return dag.makePower( randomExpr( dag, rng, nvars, depth - 1 ),
                            exps[rng() % 6] );
   }
   case 5:
      return dag.makeExp( randomExpr( dag, rng, nvars, depth - 1 ) );
   case 6:
      return dag.makeLog( randomExpr( dag, rng, nvars, depth - 1 ) );
   default:
      return dag.makeAbs( randomExpr( dag, rng, nvars, depth - 1 ) );
   }
}

} // namespace

TEST_CASE( "expr-parse-atoms" )
{
   ExprDag dag;
   int x = parseExpression( dag, "x", xyVars );
   REQUIRE( dag.node( x ).isVar() );
   REQUIRE( dag.node( x ).varIndex == 0 );

   int c = parseExpression( dag, "2+3", xyVars );
   REQUIRE( dag.node( c ).isConst() );
   REQUIRE( dag.node( c ).value == 5.0 );

   int h = parseExpression( dag, "0.5", xyVars );
   REQUIRE( dag.node( h ).value == 0.5 );
}

TEST_CASE( "expr-shared-subterm-is-stored-once" )
{
   ExprDag dag;
   int root = parseExpression( dag, "log(x)^2 + 2*log(x)*y + y^2", xyVars );

   // both occurrences of log(x) must resolve to the same node id
   int nlogs = 0;
   std::vector<char> mark = dag.reachable( root );
   for( int id = 0; id < dag.numNodes(); ++id )
      if( mark[id] && dag.node( id ).op == ExprOp::kLog )
         ++nlogs;
   REQUIRE( nlogs == 1 );

   // parsing the same text again must not grow the graph
   int before = dag.numNodes();
   int root2 = parseExpression( dag, "log(x)^2 + 2*log(x)*y + y^2", xyVars );
   REQUIRE( root2 == root );
   REQUIRE( dag.numNodes() == before );
}

TEST_CASE( "expr-children-precede-parents" )
{
   ExprDag dag;
   std::mt19937 rng( 42 );
   for( int k = 0; k < 50; ++k )
   {
      int root = randomExpr( dag, rng, 3, 4 );
      for( int id = 0; id <= root; ++id )
         for( int c : dag.node( id ).children )
            REQUIRE( c < id );
   }
}

TEST_CASE( "expr-canonical-forms" )
{
   ExprDag dag;

   int twoX = parseExpression( dag, "x + x", xyVars );
   REQUIRE( dag.node( twoX ).op == ExprOp::kSum );
   REQUIRE( dag.node( twoX ).children.size() == 1 );
   REQUIRE( dag.node( twoX ).coeffs[0] == 2.0 );

   int zero = parseExpression( dag, "x - x", xyVars );
   REQUIRE( dag.node( zero ).isConst() );
   REQUIRE( dag.node( zero ).value == 0.0 );

   // a scaled product keeps the plain product as a distinct node
   int sxy = parseExpression( dag, "2*x*y", xyVars );
   REQUIRE( dag.node( sxy ).op == ExprOp::kSum );
   int inner = dag.node( sxy ).children[0];
   REQUIRE( dag.node( inner ).op == ExprOp::kProduct );
   REQUIRE( dag.node( inner ).children.size() == 2 );

   int pw = parseExpression( dag, "x^1", xyVars );
   REQUIRE( dag.node( pw ).isVar() );
   int one = parseExpression( dag, "y^0", xyVars );
   REQUIRE( dag.node( one ).value == 1.0 );
}

TEST_CASE( "expr-parse-division-as-negative-power" )
{
   ExprDag dag;
   int root = parseExpression( dag, "x/y", xyVars );
   REQUIRE( dag.node( root ).op == ExprOp::kProduct );
   bool sawInverse = false;
   for( int c : dag.node( root ).children )
      if( dag.node( c ).op == ExprOp::kPower && dag.node( c ).value == -1.0 )
         sawInverse = true;
   REQUIRE( sawInverse );
   REQUIRE( evalAt( dag, root, { 6.0, 3.0 } ) == doctest::Approx( 2.0 ) );
}

TEST_CASE( "expr-parse-errors-carry-position" )
{
   ExprDag dag;
   REQUIRE_THROWS_AS( parseExpression( dag, "x + ", xyVars ),
                      ExprParseError );
   REQUIRE_THROWS_AS( parseExpression( dag, "z + 1", xyVars ),
                      ExprParseError );
   REQUIRE_THROWS_AS( parseExpression( dag, "x^y", xyVars ), ExprParseError );
   REQUIRE_THROWS_AS( parseExpression( dag, "x 2", xyVars ), ExprParseError );
   REQUIRE_THROWS_AS( parseExpression( dag, "log x", xyVars ),
                      ExprParseError );

   try
   {
      parseExpression( dag, "x + q", xyVars );
      REQUIRE( false );
   }
   catch( const ExprParseError& e )
   {
      REQUIRE( e.pos == 4 );
   }
}

TEST_CASE( "expr-eval-quadratic-in-log" )
{
   ExprDag dag;
   int root = parseExpression( dag, "log(x)^2 + 2*log(x)*y + y^2", xyVars );

   // at x=1 the log vanishes and only y^2 remains
   REQUIRE( evalAt( dag, root, { 1.0, 2.0 } ) == doctest::Approx( 4.0 ) );
   // at x=e, y=1 the value is (1+1)^2
   REQUIRE( evalAt( dag, root, { std::exp( 1.0 ), 1.0 } ) ==
            doctest::Approx( 4.0 ) );
}

TEST_CASE( "expr-eval-domain-errors-yield-nan" )
{
   ExprDag dag;
   int lg = parseExpression( dag, "log(x)", xyVars );
   REQUIRE( std::isnan( evalAt( dag, lg, { 0.0, 0.0 } ) ) );
   REQUIRE( std::isnan( evalAt( dag, lg, { -1.0, 0.0 } ) ) );

   int inv = parseExpression( dag, "1/x", xyVars );
   REQUIRE( std::isnan( evalAt( dag, inv, { 0.0, 0.0 } ) ) );

   int frac = parseExpression( dag, "x^0.5", xyVars );
   REQUIRE( std::isnan( evalAt( dag, frac, { -2.0, 0.0 } ) ) );
   REQUIRE( evalAt( dag, frac, { 4.0, 0.0 } ) == doctest::Approx( 2.0 ) );

   int ex = parseExpression( dag, "exp(x)", xyVars );
   REQUIRE( evalAt( dag, ex, { 0.0, 0.0 } ) == doctest::Approx( 1.0 ) );
}

TEST_CASE( "expr-eval-unary-minus-binds-below-power" )
{
   ExprDag dag;
   int root = parseExpression( dag, "-x^2", xyVars );
   REQUIRE( evalAt( dag, root, { 3.0, 0.0 } ) == doctest::Approx( -9.0 ) );
}

TEST_CASE( "expr-interval-images" )
{
   ExprDag dag;
   int lg = parseExpression( dag, "log(x)", xyVars );
   std::vector<Interval> box = { Interval( 1.0, std::exp( 1.0 ) ),
                                 Interval( 0.0, 0.0 ) };
   Interval r = intervalEval( dag, lg, box );
   REQUIRE( r.lo == doctest::Approx( 0.0 ).epsilon( 1e-9 ) );
   REQUIRE( r.hi == doctest::Approx( 1.0 ) );
   REQUIRE( r.contains( 0.0 ) );
   REQUIRE( r.contains( 1.0 ) );

   int prod = parseExpression( dag, "x*y", xyVars );
   box = { Interval( -1.0, 1.0 ), Interval( 1.0, 2.0 ) };
   r = intervalEval( dag, prod, box );
   REQUIRE( r.lo == doctest::Approx( -2.0 ) );
   REQUIRE( r.hi == doctest::Approx( 2.0 ) );

   int sq = parseExpression( dag, "x^2", xyVars );
   box = { Interval( -1.0, 2.0 ), Interval( 0.0, 0.0 ) };
   r = intervalEval( dag, sq, box );
   REQUIRE( r.lo == 0.0 );
   REQUIRE( r.hi == doctest::Approx( 4.0 ) );

   // empty domain: log of a nonpositive interval
   box = { Interval( -2.0, -1.0 ), Interval( 0.0, 0.0 ) };
   REQUIRE( intervalEval( dag, lg, box ).isEmpty() );
}

TEST_CASE( "expr-interval-containment-sampling" )
{
   std::mt19937 rng( 7 );
   std::uniform_real_distribution<double> wdist( 0.0, 3.0 );
   std::uniform_real_distribution<double> ldist( -3.0, 3.0 );
   std::uniform_real_distribution<double> u01( 0.0, 1.0 );

   for( int k = 0; k < 200; ++k )
   {
      ExprDag dag;
      int root = randomExpr( dag, rng, 3, 3 );
      std::vector<Interval> box( 3 );
      for( auto& b : box )
      {
         double lo = ldist( rng );
         b = Interval( lo, lo + wdist( rng ) );
      }
      Interval r = intervalEval( dag, root, box );
      for( int s = 0; s < 20; ++s )
      {
         std::vector<double> pt( 3 );
         for( int i = 0; i < 3; ++i )
            pt[i] = box[i].lo + u01( rng ) * box[i].width();
         double v = evalExpression( dag, root, pt );
         if( std::isnan( v ) )
            continue;
         REQUIRE( !r.isEmpty() );
         // small slack for roundoff in the point evaluation itself
         double slack = 1e-9 * std::max( 1.0, std::fabs( v ) );
         REQUIRE( v >= r.lo - slack );
         REQUIRE( v <= r.hi + slack );
      }
   }
}

TEST_CASE( "expr-backward-log-upper-bound" )
{
   ExprDag dag;
   int lg = parseExpression( dag, "log(x)", xyVars );
   std::vector<Interval> box = { Interval( 0.1, 10.0 ),
                                 Interval( 0.0, 0.0 ) };
   bool ok = backwardPropagate( dag, lg, Interval( -infinity, 0.5 ), box );
   REQUIRE( ok );
   REQUIRE( box[0].lo == doctest::Approx( 0.1 ) );
   REQUIRE( box[0].hi == doctest::Approx( std::exp( 0.5 ) ) );
}

TEST_CASE( "expr-backward-square-pins-root" )
{
   ExprDag dag;
   int sq = parseExpression( dag, "x^2", xyVars );

   std::vector<Interval> box = { Interval( 1.0, 10.0 ),
                                 Interval( 0.0, 0.0 ) };
   REQUIRE( backwardPropagate( dag, sq, Interval( 4.0, 4.0 ), box ) );
   REQUIRE( box[0].lo == doctest::Approx( 2.0 ) );
   REQUIRE( box[0].hi == doctest::Approx( 2.0 ) );

   // with a sign-spanning domain both branches stay alive
   box = { Interval( -10.0, 10.0 ), Interval( 0.0, 0.0 ) };
   REQUIRE( backwardPropagate( dag, sq, Interval( 4.0, 4.0 ), box ) );
   REQUIRE( box[0].lo == doctest::Approx( -2.0 ) );
   REQUIRE( box[0].hi == doctest::Approx( 2.0 ) );

   // negative target is infeasible for a square
   box = { Interval( -10.0, 10.0 ), Interval( 0.0, 0.0 ) };
   REQUIRE( !backwardPropagate( dag, sq, Interval( -2.0, -1.0 ), box ) );
}

TEST_CASE( "expr-backward-sum-splits-slack" )
{
   ExprDag dag;
   int root = parseExpression( dag, "x + y", xyVars );
   std::vector<Interval> box = { Interval( 0.0, 10.0 ),
                                 Interval( 0.0, 10.0 ) };
   REQUIRE( backwardPropagate( dag, root, Interval( -infinity, 4.0 ), box ) );
   REQUIRE( box[0].hi == doctest::Approx( 4.0 ) );
   REQUIRE( box[1].hi == doctest::Approx( 4.0 ) );
   REQUIRE( box[0].lo == 0.0 );

   // equality target with one variable fixed determines the other
   box = { Interval( 3.0, 3.0 ), Interval( 0.0, 10.0 ) };
   REQUIRE( backwardPropagate( dag, root, Interval( 5.0, 5.0 ), box ) );
   REQUIRE( box[1].lo == doctest::Approx( 2.0 ) );
   REQUIRE( box[1].hi == doctest::Approx( 2.0 ) );
}

TEST_CASE( "expr-backward-soundness-sampling" )
{
   std::mt19937 rng( 11 );
   std::uniform_real_distribution<double> wdist( 0.0, 3.0 );
   std::uniform_real_distribution<double> ldist( -3.0, 3.0 );
   std::uniform_real_distribution<double> u01( 0.0, 1.0 );

   for( int k = 0; k < 200; ++k )
   {
      ExprDag dag;
      int root = randomExpr( dag, rng, 3, 3 );
      std::vector<Interval> box( 3 );
      for( auto& b : box )
      {
         double lo = ldist( rng );
         b = Interval( lo, lo + wdist( rng ) );
      }
      double tlo = ldist( rng );
      Interval target( tlo, tlo + wdist( rng ) );

      std::vector<Interval> tightened = box;
      bool feasible = backwardPropagate( dag, root, target, tightened );

      for( int s = 0; s < 20; ++s )
      {
         std::vector<double> pt( 3 );
         for( int i = 0; i < 3; ++i )
            pt[i] = box[i].lo + u01( rng ) * box[i].width();
         double v = evalExpression( dag, root, pt );
         if( std::isnan( v ) || !target.contains( v ) )
            continue;
         // a feasible sample point must survive the tightening
         REQUIRE( feasible );
         for( int i = 0; i < 3; ++i )
         {
            double slack = 1e-7 * std::max( 1.0, std::fabs( pt[i] ) );
            REQUIRE( pt[i] >= tightened[i].lo - slack );
            REQUIRE( pt[i] <= tightened[i].hi + slack );
         }
      }
   }
}

TEST_CASE( "expr-gradient-basics" )
{
   ExprDag dag;

   // d/dx log(x)^2 = 2 log(x)/x; at x=2 this is log(2)
   int lsq = parseExpression( dag, "log(x)^2", xyVars );
   std::vector<double> g =
       gradientExpression( dag, lsq, std::vector<double>{ 2.0, 0.0 } );
   REQUIRE( g.size() == 2 );
   REQUIRE( g[0] == doctest::Approx( std::log( 2.0 ) ) );
   REQUIRE( g[1] == 0.0 );

   // a linear term has a constant gradient
   int lin = parseExpression( dag, "3*x - 2*y + 7", xyVars );
   g = gradientExpression( dag, lin, std::vector<double>{ 10.0, -4.0 } );
   REQUIRE( g[0] == doctest::Approx( 3.0 ) );
   REQUIRE( g[1] == doctest::Approx( -2.0 ) );

   // bilinear term: gradient swaps the coordinates
   int bil = parseExpression( dag, "x*y", xyVars );
   g = gradientExpression( dag, bil, std::vector<double>{ 3.0, 5.0 } );
   REQUIRE( g[0] == doctest::Approx( 5.0 ) );
   REQUIRE( g[1] == doctest::Approx( 3.0 ) );

   // domain error reports an empty gradient
   g = gradientExpression( dag, lsq, std::vector<double>{ -1.0, 0.0 } );
   REQUIRE( g.empty() );
}

TEST_CASE( "expr-gradient-matches-central-differences" )
{
   std::mt19937 rng( 23 );
   std::uniform_real_distribution<double> pdist( -2.0, 2.0 );

   int tested = 0;
   for( int k = 0; k < 300 && tested < 100; ++k )
   {
      ExprDag dag;
      int root = randomExpr( dag, rng, 3, 3 );
      std::vector<double> pt = { pdist( rng ), pdist( rng ), pdist( rng ) };

      std::vector<double> g = gradientExpression( dag, root, pt );
      if( g.empty() )
         continue;
      double f0 = evalExpression( dag, root, pt );
      if( !std::isfinite( f0 ) || std::fabs( f0 ) > 1e6 )
         continue;

      bool usable = true;
      std::vector<double> fd( 3 );
      for( int i = 0; i < 3 && usable; ++i )
      {
         double h = 1e-6 * std::max( 1.0, std::fabs( pt[i] ) );
         std::vector<double> lo = pt, hi = pt;
         lo[i] -= h;
         hi[i] += h;
         double flo = evalExpression( dag, root, lo );
         double fhi = evalExpression( dag, root, hi );
         if( !std::isfinite( flo ) || !std::isfinite( fhi ) )
            usable = false;
         else
            fd[i] = ( fhi - flo ) / ( 2.0 * h );
      }
      if( !usable )
         continue;

      ++tested;
      for( int i = 0; i < 3; ++i )
      {
         double tol =
             1e-4 * std::max( { 1.0, std::fabs( g[i] ), std::fabs( f0 ) } );
         REQUIRE( std::fabs( g[i] - fd[i] ) <= tol );
      }
   }
   // the generator must produce enough differentiable samples
   REQUIRE( tested >= 50 );
}

TEST_CASE( "expr-print-parse-round-trip" )
{
   std::mt19937 rng( 31 );
   std::map<std::string, int> vars = { { "x", 0 }, { "y", 1 }, { "z", 2 } };
   std::vector<std::string> names = { "x", "y", "z" };

   for( int k = 0; k < 100; ++k )
   {
      ExprDag dag;
      int root = randomExpr( dag, rng, 3, 3 );
      std::string text = printExpression( dag, root, names );
      int reparsed = parseExpression( dag, text, vars );
      CAPTURE( text );
      REQUIRE( reparsed == root );
   }
}

TEST_CASE( "expr-copy-with-variable-renaming" )
{
   ExprDag src;
   int root = parseExpression( src, "log(x)^2 + 2*log(x)*y + y^2", xyVars );

   ExprDag dst;
   // swap the two variables during the copy
   int copied = src.copyTo( dst, root, { 1, 0 } );

   std::vector<double> pt = { 1.5, std::exp( 1.0 ) };
   double expectSwapped = evalExpression( src, root,
                                          std::vector<double>{ pt[1], pt[0] } );
   REQUIRE( evalExpression( dst, copied, pt ) ==
            doctest::Approx( expectSwapped ) );
}

TEST_CASE( "expr-eval-worked-exponential-constraint" )
{
   // value of exp(log(1000) + 1 + x*y) at x=1, y=-1 equals 1000
   ExprDag dag;
   int root = parseExpression( dag, "exp(log(1000) + 1 + x*y)", xyVars );
   REQUIRE( evalAt( dag, root, { 1.0, -1.0 } ) == doctest::Approx( 1000.0 ) );
   REQUIRE( evalAt( dag, root, { 0.0, 0.0 } ) ==
            doctest::Approx( 1000.0 * std::exp( 1.0 ) ) );
}
