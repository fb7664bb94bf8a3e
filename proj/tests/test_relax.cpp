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
#include "minicip/relax.hpp"

#include <cmath>
#include <map>
#include <random>
#include <set>

using namespace minicip;

namespace
{

int
parse( ExprDag& dag, const std::string& text,
       const std::map<std::string, int>& vars )
{
   return parseExpression( dag, text, vars );
}

StructureKind
kindOf( const std::string& text, const std::vector<Interval>& box )
{
   ExprDag dag;
   std::map<std::string, int> vars = { { "x", 0 }, { "y", 1 } };
   int root = parse( dag, text, vars );
   return detectStructure( dag, root, box ).kind;
}

std::vector<Interval>
extBox( const ExtendedForm& ext )
{
   std::vector<Interval> box;
   for( int j = 0; j < ext.numVars(); ++j )
      box.push_back( Interval{ ext.lo[j], ext.hi[j] } );
   return box;
}

/// referenced variable indices of an expression
std::set<int>
referencedVars( const ExprDag& dag, int root )
{
   std::set<int> vars;
   std::vector<char> reach = dag.reachable( root );
   for( int id = 0; id <= root; ++id )
      if( reach[id] && dag.node( id ).isVar() )
         vars.insert( dag.node( id ).varIndex );
   return vars;
}

/** structural sanity of an extended form: no slack appears inside an
 *  expression, every auxiliary is defined by exactly one strictly later
 *  row */
void
checkExtInvariants( const ExtendedForm& ext )
{
   std::map<int, int> definingRow;
   for( size_t r = 0; r < ext.rows.size(); ++r )
   {
      int w = ext.rows[r].slackVar;
      REQUIRE( definingRow.count( w ) == 0 );
      definingRow[w] = static_cast<int>( r );
   }
   for( const AuxVar& aux : ext.auxVars )
      REQUIRE( definingRow.count( aux.var ) == 1 );

   for( size_t r = 0; r < ext.rows.size(); ++r )
   {
      for( int var : referencedVars( ext.dag, ext.rows[r].node ) )
      {
         REQUIRE( ext.origin[var] != VarOrigin::kSlack );
         if( ext.origin[var] == VarOrigin::kAuxiliary )
            REQUIRE( definingRow.at( var ) > static_cast<int>( r ) );
      }
   }
}

/** forward assignment of slack and auxiliary values; rows reference only
 *  later-defined variables, so a reverse sweep fills everything */
bool
forwardAssign( const ExtendedForm& ext, std::vector<double>& z )
{
   for( size_t r = ext.rows.size(); r-- > 0; )
   {
      double v = evalExpression( ext.dag, ext.rows[r].node, z );
      if( std::isnan( v ) )
         return false;
      z[ext.rows[r].slackVar] = v;
   }
   return true;
}

double
evalEstimator( const AffineEstimator& est, std::span<const double> x )
{
   double v = est.constant;
   for( size_t k = 0; k < est.cols.size(); ++k )
      v += est.vals[k] * x[est.cols[k]];
   return v;
}

/** samples the box and verifies under <= f <= over pointwise */
void
checkEstimatorSound( const ExprDag& dag, int root,
                     const std::vector<Interval>& box,
                     const AffineEstimator& est, std::mt19937& rng,
                     int samples = 10000 )
{
   std::vector<double> x( box.size() );
   int bad = 0;
   for( int s = 0; s < samples; ++s )
   {
      for( size_t j = 0; j < box.size(); ++j )
      {
         std::uniform_real_distribution<double> die( box[j].lo, box[j].hi );
         x[j] = die( rng );
      }
      double f = evalExpression( dag, root, x );
      if( std::isnan( f ) )
         continue;
      double e = evalEstimator( est, x );
      if( est.over ? f > e + 1e-9 : e > f + 1e-9 )
         ++bad;
   }
   REQUIRE( bad == 0 );
}

Instance
inlineInstance( const std::string& text )
{
   return readInstanceText( text );
}

} // namespace

TEST_CASE( "relax-structure-tags-follow-the-calculus" )
{
   Interval wide{ -10.0, 10.0 };
   std::vector<Interval> box{ wide, wide };

   REQUIRE( kindOf( "2*x + 3*y - 1", box ) == StructureKind::kLinear );
   REQUIRE( kindOf( "exp(x)", box ) == StructureKind::kConvex );
   REQUIRE( kindOf( "exp(x + 2*y)", box ) == StructureKind::kConvex );
   REQUIRE( kindOf( "log(x)", { { 0.5, 4.0 }, wide } ) ==
            StructureKind::kConcave );
   REQUIRE( kindOf( "x*y", box ) == StructureKind::kBilinear );
   REQUIRE( kindOf( "abs(x)", box ) == StructureKind::kConvex );
   REQUIRE( kindOf( "x^2", box ) == StructureKind::kConvex );
   REQUIRE( kindOf( "exp(x) + x^2", box ) == StructureKind::kConvex );
   REQUIRE( kindOf( "exp(x*y)", box ) == StructureKind::kDefault );

   // sign conditions for odd powers and reciprocals come from the box
   REQUIRE( kindOf( "x^3", { { 0.0, 2.0 }, wide } ) ==
            StructureKind::kConvex );
   REQUIRE( kindOf( "x^3", { { -2.0, 0.0 }, wide } ) ==
            StructureKind::kConcave );
   REQUIRE( kindOf( "x^3", { { -1.0, 1.0 }, wide } ) ==
            StructureKind::kDefault );
   REQUIRE( kindOf( "1/x", { { 1.0, 2.0 }, wide } ) ==
            StructureKind::kConvex );
   REQUIRE( kindOf( "1/x", { { -2.0, -1.0 }, wide } ) ==
            StructureKind::kConcave );
   REQUIRE( kindOf( "1/x", { { -1.0, 1.0 }, wide } ) ==
            StructureKind::kDefault );
   REQUIRE( kindOf( "x^0.5", { { 0.0, 4.0 }, wide } ) ==
            StructureKind::kConcave );

   // sums with a square or two-factor product term are quadratic
   ExprDag dag;
   std::map<std::string, int> vars = { { "x", 0 }, { "y", 1 } };
   int quad = parse( dag, "x^2 + 2*x*y + y^2", vars );
   StructureTag tag = detectStructure( dag, quad, box );
   REQUIRE( tag.kind == StructureKind::kQuadratic );
   REQUIRE( tag.evidence.size() == 3 );
   REQUIRE( kindOf( "x^2 - y^2", box ) == StructureKind::kQuadratic );
}

TEST_CASE( "relax-structure-detection-is-deterministic" )
{
   std::vector<Interval> box{ { -2.0, 2.0 }, { 0.5, 3.0 } };
   std::vector<std::string> pool = { "exp(x)*y + x",  "x^2 + y^2",
                                     "log(y) + x",    "x*y + exp(x + y)",
                                     "abs(x) + y^2",  "x^3 + y",
                                     "2*x - 3*y + 1", "x^2*y" };
   for( const std::string& text : pool )
   {
      ExprDag a, b;
      std::map<std::string, int> vars = { { "x", 0 }, { "y", 1 } };
      int ra = parse( a, text, vars );
      int rb = parse( b, text, vars );
      StructureTag ta1 = detectStructure( a, ra, box );
      StructureTag ta2 = detectStructure( a, ra, box );
      StructureTag tb = detectStructure( b, rb, box );
      REQUIRE( ta1.kind == ta2.kind );
      REQUIRE( ta1.evidence == ta2.evidence );
      REQUIRE( ta1.kind == tb.kind );
   }
}

TEST_CASE( "relax-extended-form-of-the-log-quadratic-row" )
{
   Instance inst = readInstance( std::string( MINICIP_DATA_DIR ) +
                                 "/logquad.inst" );
   ExtendedForm ext = buildExtendedFormulation( inst );
   REQUIRE( !ext.infeasible );
   REQUIRE( ext.numOriginal == 2 );
   REQUIRE( ext.numVars() == 4 );
   REQUIRE( ext.rows.size() == 2 );
   REQUIRE( ext.auxVars.size() == 1 );
   checkExtInvariants( ext );

   // slack of the original row carries the row sides
   REQUIRE( ext.origin[2] == VarOrigin::kSlack );
   REQUIRE( ext.lo[2] == -infinity );
   REQUIRE( ext.hi[2] == 4.0 );

   // the replaced subexpression is log(x) with image [0, 2]
   REQUIRE( ext.origin[3] == VarOrigin::kAuxiliary );
   REQUIRE( std::fabs( ext.lo[3] ) <= 1e-9 );
   REQUIRE( std::fabs( ext.hi[3] - 2.0 ) <= 1e-9 );

   std::vector<std::string> names = { "x", "y", "w1", "w2" };
   REQUIRE( printExpression( ext.dag, ext.rows[0].node, names ) ==
            "w2^2 + 2*w2*y + y^2" );
   REQUIRE( printExpression( ext.dag, ext.rows[1].node, names ) ==
            "log(x)" );
   REQUIRE( ext.rows[1].slackVar == 3 );

   // the rebuilt head row is a convex quadratic form
   StructureTag tag = detectStructure( ext.dag, ext.rows[0].node,
                                       extBox( ext ) );
   REQUIRE( tag.kind == StructureKind::kQuadratic );
   REQUIRE( tag.evidence.size() == 3 );
}

TEST_CASE( "relax-extended-form-keeps-exp-atop-the-bilinear-aux" )
{
   Instance inst = readInstance( std::string( MINICIP_DATA_DIR ) +
                                 "/expcons.inst" );
   ExtendedForm ext = buildExtendedFormulation( inst );
   REQUIRE( !ext.infeasible );
   REQUIRE( ext.numOriginal == 3 );
   REQUIRE( ext.numVars() == 5 );
   REQUIRE( ext.rows.size() == 2 );
   REQUIRE( ext.auxVars.size() == 1 );
   checkExtInvariants( ext );

   std::vector<std::string> names = { "x", "y", "z", "w1", "w2" };
   REQUIRE( printExpression( ext.dag, ext.rows[0].node, names ) ==
            "exp(w2 + 7.907755278982137) - z" );
   REQUIRE( printExpression( ext.dag, ext.rows[1].node, names ) == "x*y" );

   REQUIRE( ext.lo[3] == -infinity );
   REQUIRE( ext.hi[3] == 0.0 );
   REQUIRE( std::fabs( ext.lo[4] + 4.0 ) <= 1e-9 );
   REQUIRE( std::fabs( ext.hi[4] - 4.0 ) <= 1e-9 );
}

TEST_CASE( "relax-extended-form-of-a-linear-instance-is-trivial" )
{
   Instance inst = readInstance( std::string( MINICIP_DATA_DIR ) +
                                 "/knap.inst" );
   ExtendedForm ext = buildExtendedFormulation( inst );
   REQUIRE( ext.rows.empty() );
   REQUIRE( ext.auxVars.empty() );
   REQUIRE( ext.numVars() == 3 );
}

TEST_CASE( "relax-extended-form-chains-nested-auxiliaries" )
{
   Instance inst = inlineInstance( "[VARS]\n"
                                   "x 0 1 continuous\n"
                                   "y 0 1 continuous\n"
                                   "[OBJ]\n"
                                   "min x\n"
                                   "[NONLINEAR]\n"
                                   "n: exp(x*y)^2 <= 10\n" );
   ExtendedForm ext = buildExtendedFormulation( inst );
   REQUIRE( ext.rows.size() == 3 );
   REQUIRE( ext.auxVars.size() == 2 );
   checkExtInvariants( ext );

   std::vector<std::string> names = { "x", "y", "w1", "w2", "w3" };
   REQUIRE( printExpression( ext.dag, ext.rows[0].node, names ) == "w2^2" );
   REQUIRE( printExpression( ext.dag, ext.rows[1].node, names ) ==
            "exp(w3)" );
   REQUIRE( printExpression( ext.dag, ext.rows[2].node, names ) == "x*y" );
}

TEST_CASE( "relax-extended-form-shares-a-common-subexpression" )
{
   Instance inst = inlineInstance( "[VARS]\n"
                                   "x 0.5 3 continuous\n"
                                   "y -1 1 continuous\n"
                                   "[OBJ]\n"
                                   "min x\n"
                                   "[NONLINEAR]\n"
                                   "a: log(x)^2 <= 1\n"
                                   "b: log(x)*y <= 0.5\n" );
   ExtendedForm ext = buildExtendedFormulation( inst );
   // one auxiliary serves both rows
   REQUIRE( ext.auxVars.size() == 1 );
   REQUIRE( ext.rows.size() == 3 );
   checkExtInvariants( ext );

   std::vector<std::string> names = { "x", "y", "w1", "w2", "w3" };
   REQUIRE( printExpression( ext.dag, ext.rows[0].node, names ) == "w3^2" );
   REQUIRE( printExpression( ext.dag, ext.rows[1].node, names ) == "w3*y" );
   REQUIRE( printExpression( ext.dag, ext.rows[2].node, names ) ==
            "log(x)" );
}

TEST_CASE( "relax-extended-form-flags-empty-auxiliary-bounds" )
{
   Instance inst = inlineInstance( "[VARS]\n"
                                   "x -2 -1 continuous\n"
                                   "y 0 1 continuous\n"
                                   "[OBJ]\n"
                                   "min x\n"
                                   "[NONLINEAR]\n"
                                   "n: log(x)*y <= 1\n" );
   ExtendedForm ext = buildExtendedFormulation( inst );
   REQUIRE( ext.infeasible );
}

TEST_CASE( "relax-extended-form-projection-matches-original-feasibility" )
{
   std::vector<Instance> pool;
   pool.push_back( readInstance( std::string( MINICIP_DATA_DIR ) +
                                 "/logquad.inst" ) );
   pool.push_back( readInstance( std::string( MINICIP_DATA_DIR ) +
                                 "/expcons.inst" ) );
   pool.push_back( inlineInstance( "[VARS]\n"
                                   "x 0.5 3 continuous\n"
                                   "y -1 1 continuous\n"
                                   "[OBJ]\n"
                                   "min x\n"
                                   "[NONLINEAR]\n"
                                   "a: log(x)^2 <= 1\n"
                                   "b: log(x)*y <= 0.5\n" ) );
   pool.push_back( inlineInstance( "[VARS]\n"
                                   "x -2 2 continuous\n"
                                   "y -2 2 continuous\n"
                                   "[OBJ]\n"
                                   "min x\n"
                                   "[NONLINEAR]\n"
                                   "a: abs(x) + y^2 <= 3\n"
                                   "b: x*y >= -1\n" ) );

   for( const Instance& inst : pool )
   {
      ExtendedForm ext = buildExtendedFormulation( inst );
      REQUIRE( !ext.infeasible );
      checkExtInvariants( ext );

      int n = inst.numVars();
      int steps = n == 2 ? 13 : 7;
      std::vector<int> idx( n, 0 );
      int checked = 0;
      while( true )
      {
         std::vector<double> x( n );
         for( int j = 0; j < n; ++j )
         {
            double t = double( idx[j] ) / double( steps - 1 );
            x[j] = inst.vars[j].lo +
                   t * ( inst.vars[j].hi - inst.vars[j].lo );
         }

         bool gray = false;
         bool origFeasible = true;
         for( const NonlinearRow& row : inst.nlRows )
         {
            double v = evalExpression( inst.dag, row.root, x );
            if( std::isnan( v ) )
            {
               origFeasible = false;
               continue;
            }
            if( std::fabs( v - row.lhs ) <= 1e-7 ||
                std::fabs( v - row.rhs ) <= 1e-7 )
               gray = true;
            if( v < row.lhs - 1e-9 || v > row.rhs + 1e-9 )
               origFeasible = false;
         }

         if( !gray )
         {
            std::vector<double> z( ext.numVars(), 0.0 );
            for( int j = 0; j < n; ++j )
               z[j] = x[j];
            bool extFeasible = forwardAssign( ext, z );
            if( extFeasible )
               for( int j = n; j < ext.numVars(); ++j )
                  if( z[j] < ext.lo[j] - 1e-9 || z[j] > ext.hi[j] + 1e-9 )
                     extFeasible = false;
            REQUIRE( origFeasible == extFeasible );
            if( origFeasible )
            {
               // forward values of auxiliaries stay inside stored bounds
               std::vector<double> z2( ext.numVars(), 0.0 );
               for( int j = 0; j < n; ++j )
                  z2[j] = x[j];
               REQUIRE( forwardAssign( ext, z2 ) );
               for( const AuxVar& aux : ext.auxVars )
               {
                  REQUIRE( z2[aux.var] >= aux.bounds.lo - 1e-9 );
                  REQUIRE( z2[aux.var] <= aux.bounds.hi + 1e-9 );
               }
            }
            ++checked;
         }

         int j = 0;
         while( j < n && ++idx[j] == steps )
            idx[j++] = 0;
         if( j == n )
            break;
      }
      REQUIRE( checked > 20 );
   }
}

TEST_CASE( "relax-hand-worked-estimators" )
{
   ExprDag dag;
   std::map<std::string, int> vars = { { "x", 0 }, { "y", 1 } };

   // tangent of exp at 0 is 1 + x
   {
      int root = parse( dag, "exp(x)", vars );
      std::vector<Interval> box{ { -2.0, 2.0 }, { 0.0, 1.0 } };
      std::vector<double> ref{ 0.0, 0.0 };
      StructureTag tag = detectStructure( dag, root, box );
      auto est = estimateExpression( dag, root, tag, box, ref, false );
      REQUIRE( est.has_value() );
      REQUIRE( est->cols == std::vector<int>{ 0 } );
      REQUIRE( est->vals[0] == doctest::Approx( 1.0 ) );
      REQUIRE( est->constant == doctest::Approx( 1.0 ) );
   }

   // McCormick envelope of x*y on the unit box
   {
      int root = parse( dag, "x*y", vars );
      std::vector<Interval> box{ { 0.0, 1.0 }, { 0.0, 1.0 } };
      auto pieces = mcCormickEstimators( dag, root, box );
      REQUIRE( pieces.size() == 4 );
      // under: w >= 0 and w >= x + y - 1
      REQUIRE( !pieces[0].over );
      REQUIRE( pieces[0].cols.empty() );
      REQUIRE( pieces[0].constant == doctest::Approx( 0.0 ) );
      REQUIRE( !pieces[1].over );
      REQUIRE( pieces[1].cols == std::vector<int>{ 0, 1 } );
      REQUIRE( pieces[1].vals[0] == doctest::Approx( 1.0 ) );
      REQUIRE( pieces[1].vals[1] == doctest::Approx( 1.0 ) );
      REQUIRE( pieces[1].constant == doctest::Approx( -1.0 ) );
      // over: w <= y and w <= x
      REQUIRE( pieces[2].over );
      REQUIRE( pieces[2].cols == std::vector<int>{ 1 } );
      REQUIRE( pieces[2].vals[0] == doctest::Approx( 1.0 ) );
      REQUIRE( pieces[3].over );
      REQUIRE( pieces[3].cols == std::vector<int>{ 0 } );
      REQUIRE( pieces[3].vals[0] == doctest::Approx( 1.0 ) );
   }

   // secant of the concave log on [1, e^2] underestimates through
   // (1,0) and (e^2,2)
   {
      int root = parse( dag, "log(x)", vars );
      double e2 = 7.38905609893065;
      std::vector<Interval> box{ { 1.0, e2 }, { 0.0, 1.0 } };
      std::vector<double> ref{ 2.0, 0.0 };
      StructureTag tag = detectStructure( dag, root, box );
      REQUIRE( tag.kind == StructureKind::kConcave );
      auto est = estimateExpression( dag, root, tag, box, ref, false );
      REQUIRE( est.has_value() );
      double slope = 2.0 / ( e2 - 1.0 );
      REQUIRE( est->cols == std::vector<int>{ 0 } );
      REQUIRE( est->vals[0] == doctest::Approx( slope ) );
      REQUIRE( est->constant == doctest::Approx( -slope ) );
   }

   // abs: tangent below, secant above
   {
      int root = parse( dag, "abs(x)", vars );
      std::vector<Interval> box{ { -1.0, 2.0 }, { 0.0, 1.0 } };
      std::vector<double> ref{ -0.5, 0.0 };
      StructureTag tag = detectStructure( dag, root, box );
      auto under = estimateExpression( dag, root, tag, box, ref, false );
      REQUIRE( under.has_value() );
      REQUIRE( under->vals[0] == doctest::Approx( -1.0 ) );
      REQUIRE( std::fabs( under->constant ) <= 1e-12 );
      auto over = estimateExpression( dag, root, tag, box, ref, true );
      REQUIRE( over.has_value() );
      REQUIRE( over->vals[0] == doctest::Approx( 1.0 / 3.0 ) );
      REQUIRE( over->constant == doctest::Approx( 4.0 / 3.0 ) );
   }

   // square: secant over [1,3] is 4x - 3
   {
      int root = parse( dag, "x^2", vars );
      std::vector<Interval> box{ { 1.0, 3.0 }, { 0.0, 1.0 } };
      std::vector<double> ref{ 2.0, 0.0 };
      StructureTag tag = detectStructure( dag, root, box );
      auto over = estimateExpression( dag, root, tag, box, ref, true );
      REQUIRE( over.has_value() );
      REQUIRE( over->vals[0] == doctest::Approx( 4.0 ) );
      REQUIRE( over->constant == doctest::Approx( -3.0 ) );
   }

   // reciprocal on a positive box: tangent below, secant above
   {
      int root = parse( dag, "1/x", vars );
      std::vector<Interval> box{ { 1.0, 2.0 }, { 0.0, 1.0 } };
      std::vector<double> ref{ 1.5, 0.0 };
      StructureTag tag = detectStructure( dag, root, box );
      REQUIRE( tag.kind == StructureKind::kConvex );
      auto under = estimateExpression( dag, root, tag, box, ref, false );
      REQUIRE( under.has_value() );
      REQUIRE( under->vals[0] == doctest::Approx( -4.0 / 9.0 ) );
      REQUIRE( under->constant == doctest::Approx( 4.0 / 3.0 ) );
      auto over = estimateExpression( dag, root, tag, box, ref, true );
      REQUIRE( over.has_value() );
      REQUIRE( over->vals[0] == doctest::Approx( -0.5 ) );
      REQUIRE( over->constant == doctest::Approx( 1.5 ) );
   }
}

TEST_CASE( "relax-estimators-return-none-on-unbounded-boxes" )
{
   ExprDag dag;
   std::map<std::string, int> vars = { { "x", 0 }, { "y", 1 } };
   int prod = parse( dag, "x*y", vars );
   std::vector<Interval> box{ { -infinity, infinity }, { 0.0, 1.0 } };
   std::vector<double> ref{ 1.0, 0.5 };
   StructureTag tag = detectStructure( dag, prod, box );
   REQUIRE( tag.kind == StructureKind::kBilinear );
   // every corner piece needs a bound of x that does not exist
   REQUIRE( !estimateExpression( dag, prod, tag, box, ref, false )
                 .has_value() );
   REQUIRE( !estimateExpression( dag, prod, tag, box, ref, true )
                 .has_value() );

   // secant side of exp needs a finite argument range
   int ex = parse( dag, "exp(x)", vars );
   StructureTag tagExp = detectStructure( dag, ex, box );
   REQUIRE( !estimateExpression( dag, ex, tagExp, box, ref, true )
                 .has_value() );
   // the tangent side still works
   REQUIRE( estimateExpression( dag, ex, tagExp, box, ref, false )
                .has_value() );
}

TEST_CASE( "relax-estimator-soundness-by-sampling" )
{
   std::mt19937 rng( 20260815 );
   struct Config
   {
      std::string text;
      std::vector<Interval> box;
   };
   std::vector<Config> pool = {
      { "exp(x)", { { -2.0, 2.0 }, { 0.0, 1.0 } } },
      { "log(x)", { { 0.5, 4.0 }, { 0.0, 1.0 } } },
      { "x^2", { { -1.5, 2.0 }, { 0.0, 1.0 } } },
      { "x^3", { { 0.2, 2.0 }, { 0.0, 1.0 } } },
      { "x^3", { { -2.0, -0.2 }, { 0.0, 1.0 } } },
      { "x^1.5", { { 0.0, 2.0 }, { 0.0, 1.0 } } },
      { "x^0.5", { { 0.01, 4.0 }, { 0.0, 1.0 } } },
      { "1/x", { { 0.5, 3.0 }, { 0.0, 1.0 } } },
      { "1/x", { { -3.0, -0.5 }, { 0.0, 1.0 } } },
      { "abs(x)", { { -2.0, 1.0 }, { 0.0, 1.0 } } },
      { "x*y", { { -1.0, 2.0 }, { -2.0, 1.0 } } },
      { "x^2 + 2*x*y + y^2", { { -1.0, 1.0 }, { -1.0, 1.0 } } },
      { "x^2 - y^2", { { -1.0, 1.0 }, { -1.0, 1.0 } } },
      { "exp(x) + log(y) + 3*x", { { -1.0, 1.0 }, { 0.5, 2.0 } } },
      { "x*y - 2*x^2 + exp(y)", { { -1.0, 1.0 }, { -1.0, 1.0 } } },
   };

   int generated = 0;
   for( const Config& cfg : pool )
   {
      ExprDag dag;
      std::map<std::string, int> vars = { { "x", 0 }, { "y", 1 } };
      int root = parse( dag, cfg.text, vars );
      StructureTag tag = detectStructure( dag, root, cfg.box );
      for( int trial = 0; trial < 3; ++trial )
      {
         std::vector<double> ref( cfg.box.size() );
         for( size_t j = 0; j < cfg.box.size(); ++j )
         {
            std::uniform_real_distribution<double> die( cfg.box[j].lo,
                                                        cfg.box[j].hi );
            ref[j] = die( rng );
         }
         for( bool over : { false, true } )
         {
            auto est =
                estimateExpression( dag, root, tag, cfg.box, ref, over );
            if( !est )
               continue;
            REQUIRE( est->over == over );
            checkEstimatorSound( dag, root, cfg.box, *est, rng );
            ++generated;
         }
      }
   }
   REQUIRE( generated >= 60 );
}

TEST_CASE( "relax-multilinear-products-get-recursive-envelopes" )
{
   ExprDag dag;
   std::map<std::string, int> vars = { { "x", 0 }, { "y", 1 }, { "z", 2 } };
   int root = parse( dag, "x*y*z", vars );
   std::vector<Interval> box{ { 0.5, 2.0 }, { -1.0, 1.5 }, { 1.0, 3.0 } };
   StructureTag tag = detectStructure( dag, root, box );
   REQUIRE( tag.kind == StructureKind::kDefault );

   std::mt19937 rng( 4242 );
   int generated = 0;
   for( int trial = 0; trial < 5; ++trial )
   {
      std::vector<double> ref( 3 );
      for( size_t j = 0; j < 3; ++j )
      {
         std::uniform_real_distribution<double> die( box[j].lo, box[j].hi );
         ref[j] = die( rng );
      }
      for( bool over : { false, true } )
      {
         auto est = estimateExpression( dag, root, tag, box, ref, over );
         REQUIRE( est.has_value() );
         checkEstimatorSound( dag, root, box, *est, rng, 4000 );
         ++generated;
      }
   }
   REQUIRE( generated == 10 );
}

TEST_CASE( "relax-estimator-cut-links-the-slack-variable" )
{
   AffineEstimator est;
   est.cols = { 0 };
   est.vals = { 2.0 };
   est.constant = 1.0;
   est.over = false;

   // under: 2x + 1 <= w, i.e. 2x - w <= -1
   std::vector<double> point{ 1.0, 0.0, 0.0, 0.0, 0.0, 2.0 };
   Cut cut = estimatorCut( est, 5, point );
   REQUIRE( cut.cols == std::vector<int>{ 0, 5 } );
   REQUIRE( cut.vals[0] == doctest::Approx( 2.0 ) );
   REQUIRE( cut.vals[1] == doctest::Approx( -1.0 ) );
   REQUIRE( cut.rhs == doctest::Approx( -1.0 ) );
   REQUIRE( cut.lhs == -infinity );
   // activity 0 against rhs -1 violates by 1, norm is sqrt(5)
   REQUIRE( cut.efficacy == doctest::Approx( 1.0 / std::sqrt( 5.0 ) ) );

   est.over = true;
   Cut overCut = estimatorCut( est, 5, point );
   REQUIRE( overCut.vals[0] == doctest::Approx( -2.0 ) );
   REQUIRE( overCut.vals[1] == doctest::Approx( 1.0 ) );
   REQUIRE( overCut.rhs == doctest::Approx( 1.0 ) );
   // w = 2 <= 2x + 1 = 3 holds, no violation
   REQUIRE( overCut.efficacy == 0.0 );
}

TEST_CASE( "relax-cut-selection-orders-and-filters" )
{
   auto mkcut = []( std::vector<int> cols, std::vector<double> vals,
                    double eff ) {
      Cut c;
      c.cols = std::move( cols );
      c.vals = std::move( vals );
      c.rhs = 1.0;
      c.efficacy = eff;
      return c;
   };

   REQUIRE( selectCuts( {}, 4 ).empty() );

   // duplicates collapse to one pick
   std::vector<Cut> dup = { mkcut( { 0, 1 }, { 1.0, 1.0 }, 0.5 ),
                            mkcut( { 0, 1 }, { 1.0, 1.0 }, 0.5 ) };
   REQUIRE( selectCuts( dup, 2 ) == std::vector<int>{ 0 } );

   // efficacy ordering with tie-break by index
   std::vector<Cut> three = { mkcut( { 0 }, { 1.0 }, 0.5 ),
                              mkcut( { 1 }, { 1.0 }, 0.2 ),
                              mkcut( { 2 }, { 1.0 }, 0.9 ) };
   REQUIRE( selectCuts( three, 2 ) == std::vector<int>{ 2, 0 } );
   REQUIRE( selectCuts( three, 5 ) == std::vector<int>{ 2, 0, 1 } );

   // nearly parallel directions are dropped, opposite directions are kept
   std::vector<Cut> mix = { mkcut( { 0, 1 }, { 1.0, 1.0 }, 0.9 ),
                            mkcut( { 0, 1 }, { 1.0, 1.001 }, 0.8 ),
                            mkcut( { 0, 1 }, { -1.0, -1.0 }, 0.7 ),
                            mkcut( { 0, 1 }, { 1.0, -1.0 }, 0.6 ) };
   REQUIRE( selectCuts( mix, 4 ) == std::vector<int>{ 0, 2, 3 } );
}
