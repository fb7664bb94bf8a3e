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

#include "minicip/sbb.hpp"

#include "minicip/io.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <ostream>
#include <queue>
#include <stdexcept>

namespace minicip
{

namespace
{

constexpr double kFeasTol = 1e-6;
constexpr double kCutoffTol = 1e-9;
/// derived bounds are relaxed outward by this much so that feasibility-based
/// tightening never cuts off the optimum through roundoff
constexpr double kBoundEps = 1e-9;

bool
tightenLower( Interval& box, double bound )
{
   if( bound > box.lo + 1e-12 )
      box.lo = bound;
   return box.lo <= box.hi;
}

bool
tightenUpper( Interval& box, double bound )
{
   if( bound < box.hi - 1e-12 )
      box.hi = bound;
   return box.lo <= box.hi;
}

/** activity-based tightening of one linear row; the residual activity drops
 *  a single term, so a bound transfers only when at most that term
 *  contributes an infinite end */
bool
tightenLinearRow( const LinearRow& row, std::vector<Interval>& box )
{
   size_t nterms = row.cols.size();
   std::vector<double> minTerm( nterms ), maxTerm( nterms );
   double minAct = 0.0, maxAct = 0.0;
   int minInf = 0, maxInf = 0;
   for( size_t k = 0; k < nterms; ++k )
   {
      const Interval& b = box[row.cols[k]];
      double a = row.vals[k];
      minTerm[k] = a > 0.0 ? detail::safeMul( a, b.lo )
                           : detail::safeMul( a, b.hi );
      maxTerm[k] = a > 0.0 ? detail::safeMul( a, b.hi )
                           : detail::safeMul( a, b.lo );
      if( std::isinf( minTerm[k] ) )
         ++minInf;
      else
         minAct += minTerm[k];
      if( std::isinf( maxTerm[k] ) )
         ++maxInf;
      else
         maxAct += maxTerm[k];
   }

   if( minInf == 0 && minAct > row.rhs + kFeasTol )
      return false;
   if( maxInf == 0 && maxAct < row.lhs - kFeasTol )
      return false;

   for( size_t k = 0; k < nterms; ++k )
   {
      double a = row.vals[k];
      if( a == 0.0 )
         continue;
      bool minRestFinite = minInf == ( std::isinf( minTerm[k] ) ? 1 : 0 );
      bool maxRestFinite = maxInf == ( std::isinf( maxTerm[k] ) ? 1 : 0 );
      double minRest =
          minAct - ( std::isinf( minTerm[k] ) ? 0.0 : minTerm[k] );
      double maxRest =
          maxAct - ( std::isinf( maxTerm[k] ) ? 0.0 : maxTerm[k] );
      Interval& b = box[row.cols[k]];

      if( minRestFinite && std::isfinite( row.rhs ) )
      {
         double v = ( row.rhs - minRest ) / a;
         double slack = kBoundEps * std::max( 1.0, std::fabs( v ) );
         if( a > 0.0 )
         {
            if( !tightenUpper( b, v + slack ) )
               return false;
         }
         else if( !tightenLower( b, v - slack ) )
            return false;
      }
      if( maxRestFinite && std::isfinite( row.lhs ) )
      {
         double v = ( row.lhs - maxRest ) / a;
         double slack = kBoundEps * std::max( 1.0, std::fabs( v ) );
         if( a > 0.0 )
         {
            if( !tightenLower( b, v - slack ) )
               return false;
         }
         else if( !tightenUpper( b, v + slack ) )
            return false;
      }
   }
   return true;
}

/// original variables referenced by an expression; ext slack vars never
/// appear inside expressions
void
collectOriginalVars( const ExprDag& dag, int root, int numOriginal,
                     std::vector<char>& mark )
{
   std::vector<char> reach = dag.reachable( root );
   for( int id = 0; id < dag.numNodes(); ++id )
      if( reach[id] && dag.node( id ).isVar() &&
          dag.node( id ).varIndex < numOriginal )
         mark[dag.node( id ).varIndex] = 1;
}

double
extRowViolation( const ExtendedForm& ext, const ExtRow& row,
                 const std::vector<double>& x )
{
   double h = evalExpression( ext.dag, row.node, x );
   if( std::isnan( h ) )
      return infinity;
   return std::fabs( h - x[row.slackVar] );
}

std::vector<Cut>
estimatorSeparator( const Instance& instance, const ExtendedForm& ext,
                    const std::vector<Interval>& box,
                    const std::vector<double>& x )
{
   static_cast<void>( instance );
   std::vector<Cut> cuts;
   for( const ExtRow& row : ext.rows )
   {
      StructureTag tag = detectStructure( ext.dag, row.node, box );
      if( tag.kind == StructureKind::kLinear )
         continue; // present in the LP as a static row

      double h = evalExpression( ext.dag, row.node, x );
      double w = x[row.slackVar];
      bool wantUnder, wantOver;
      if( std::isnan( h ) )
         wantUnder = wantOver = true;
      else
      {
         wantUnder = h > w + kFeasTol;
         wantOver = w > h + kFeasTol;
      }
      if( !wantUnder && !wantOver )
         continue;

      for( bool over : { false, true } )
      {
         if( over ? !wantOver : !wantUnder )
            continue;
         auto est = estimateExpression( ext.dag, row.node, tag, box, x,
                                        over );
         if( est )
         {
            Cut cut = estimatorCut( *est, row.slackVar, x );
            if( cut.efficacy > 1e-9 )
               cuts.push_back( std::move( cut ) );
         }
      }
      if( tag.kind == StructureKind::kBilinear )
      {
         for( const AffineEstimator& piece :
              mcCormickEstimators( ext.dag, row.node, box ) )
         {
            if( piece.over ? !wantOver : !wantUnder )
               continue;
            Cut cut = estimatorCut( piece, row.slackVar, x );
            if( cut.efficacy > 1e-9 )
               cuts.push_back( std::move( cut ) );
         }
      }
   }
   return cuts;
}

struct NodeOrder
{
   bool
   operator()( const Node& a, const Node& b ) const
   {
      if( a.parentDual != b.parentDual )
         return a.parentDual > b.parentDual;
      return a.seq > b.seq;
   }
};

} // namespace

bool
fbbtRound( const Instance& instance, const ExtendedForm& ext,
           std::vector<Interval>& box )
{
   // integral bounds round inward
   for( int j = 0; j < instance.numVars(); ++j )
   {
      if( !instance.vars[j].integral )
         continue;
      Interval& b = box[j];
      if( std::isfinite( b.lo ) )
         b.lo = std::ceil( b.lo - kFeasTol );
      if( std::isfinite( b.hi ) )
         b.hi = std::floor( b.hi + kFeasTol );
      if( b.isEmpty() )
         return false;
   }

   for( const LinearRow& row : instance.linRows )
      if( !tightenLinearRow( row, box ) )
         return false;

   for( const ExtRow& row : ext.rows )
   {
      Interval image = intervalEval( ext.dag, row.node, box );
      Interval target = intersect( image, box[row.slackVar] );
      if( target.isEmpty() )
         return false;
      box[row.slackVar] = target;
      if( !backwardPropagate( ext.dag, row.node, target, box ) )
         return false;
   }
   return true;
}

ViolationReport
checkOriginalFeasibility( const Instance& instance,
                          std::span<const double> point )
{
   int n = instance.numVars();
   assert( static_cast<int>( point.size() ) >= n );
   ViolationReport report;

   for( const LinearRow& row : instance.linRows )
   {
      double act = linearActivity( row, point );
      double viol =
          std::max( { 0.0, row.lhs - act, act - row.rhs } );
      report.linViolation.push_back( viol );
   }
   for( const NonlinearRow& row : instance.nlRows )
   {
      double v = evalExpression( instance.dag, row.root,
                                 point.subspan( 0, n ) );
      double viol = std::isnan( v )
                        ? infinity
                        : std::max( { 0.0, row.lhs - v, v - row.rhs } );
      report.nlViolation.push_back( viol );
   }
   for( int j = 0; j < n; ++j )
   {
      const Variable& var = instance.vars[j];
      report.boundViolation.push_back(
          std::max( { 0.0, var.lo - point[j], point[j] - var.hi } ) );
      report.intViolation.push_back(
          var.integral
              ? std::fabs( point[j] - std::nearbyint( point[j] ) )
              : 0.0 );
   }

   report.maxViolation = 0.0;
   for( const std::vector<double>* part :
        { &report.linViolation, &report.nlViolation,
          &report.boundViolation, &report.intViolation } )
      for( double v : *part )
         report.maxViolation = std::max( report.maxViolation, v );
   return report;
}

std::optional<Branching>
selectBranching( const Instance& instance, const ExtendedForm& ext,
                 const std::vector<Interval>& box,
                 const std::vector<double>& x )
{
   int n = instance.numVars();
   int var = -1;

   // fractional original integers, most fractional first
   double bestScore = infinity;
   for( int j = 0; j < n; ++j )
   {
      if( !instance.vars[j].integral )
         continue;
      double frac = x[j] - std::floor( x[j] );
      if( frac <= kFeasTol || frac >= 1.0 - kFeasTol )
         continue;
      double score = std::fabs( frac - 0.5 );
      if( score < bestScore - 1e-12 )
      {
         bestScore = score;
         var = j;
      }
   }

   if( var < 0 )
   {
      // original variables of violated nonlinear rows
      std::vector<char> touched( n, 0 );
      for( const ExtRow& row : ext.rows )
         if( extRowViolation( ext, row, x ) > kFeasTol )
            collectOriginalVars( ext.dag, row.node, n, touched );
      for( const NonlinearRow& row : instance.nlRows )
      {
         double v = evalExpression( instance.dag, row.root, x );
         if( std::isnan( v ) || v < row.lhs - kFeasTol ||
             v > row.rhs + kFeasTol )
            collectOriginalVars( instance.dag, row.root, n, touched );
      }

      // widest interval first, continuous before integral
      double bestWidth = 0.0;
      bool bestIntegral = true;
      for( int j = 0; j < n; ++j )
      {
         if( !touched[j] )
            continue;
         bool integral = instance.vars[j].integral;
         double minWidth = integral ? 0.999 : 1e-9;
         double width = box[j].isEmpty()
                            ? 0.0
                            : ( std::isinf( box[j].lo ) ||
                                        std::isinf( box[j].hi )
                                    ? infinity
                                    : box[j].width() );
         if( width <= minWidth )
            continue;
         if( ( bestIntegral && !integral ) ||
             ( bestIntegral == integral && width > bestWidth + 1e-12 ) )
         {
            bestIntegral = integral;
            bestWidth = width;
            var = j;
         }
      }
      if( var < 0 )
         return std::nullopt;
   }

   double lo = box[var].lo;
   double hi = box[var].hi;
   double point = x[var];
   if( std::isfinite( lo ) && std::isfinite( hi ) )
   {
      double width = hi - lo;
      point = std::clamp( point, lo + 0.2 * width, hi - 0.2 * width );
   }
   else
   {
      if( std::isfinite( lo ) && point <= lo + 1e-9 )
         point = lo + 1.0;
      if( std::isfinite( hi ) && point >= hi - 1e-9 )
         point = hi - 1.0;
   }
   return Branching{ var, point };
}

PluginRegistry
defaultRegistry()
{
   PluginRegistry registry;
   registry.propagators.push_back(
       []( const Instance& instance, const ExtendedForm& ext,
           std::vector<Interval>& box )
       { return fbbtRound( instance, ext, box ); } );
   registry.separators.push_back( estimatorSeparator );
   registry.branchingSelectors.push_back(
       []( const Instance& instance, const ExtendedForm& ext,
           const std::vector<Interval>& box, const std::vector<double>& x )
       { return selectBranching( instance, ext, box, x ); } );
   registry.cutSelector = []( const std::vector<Cut>& candidates,
                              int maxCuts )
   { return selectCuts( candidates, maxCuts ); };
   return registry;
}

SolveResult
solve( const Instance& instance, const SolveParams& params )
{
   return solve( instance, params, defaultRegistry() );
}

SolveResult
solve( const Instance& instance, const SolveParams& params,
       const PluginRegistry& registry )
{
   auto start = std::chrono::steady_clock::now();
   auto elapsed = [&start]()
   {
      return std::chrono::duration<double>(
                 std::chrono::steady_clock::now() - start )
          .count();
   };
   auto logLine = [&params]( const std::string& line )
   {
      if( params.log != nullptr )
         *params.log << line << '\n';
   };

   SolveResult result;
   int n = instance.numVars();

   ExtendedForm ext = buildExtendedFormulation( instance );
   if( ext.infeasible )
   {
      result.status = SolveStatus::kInfeasible;
      result.primalBound = infinity;
      result.dualBound = infinity;
      result.seconds = elapsed();
      logLine( "summary status infeasible nodes 0" );
      return result;
   }
   int ntot = ext.numVars();

   // static LP part: objective, linear rows, and linear extended rows
   LpProblem base;
   base.c = instance.obj;
   base.c.resize( ntot, 0.0 );
   base.lo.resize( ntot );
   base.hi.resize( ntot );
   for( const LinearRow& row : instance.linRows )
      base.rows.push_back( LpRow{ row.cols, row.vals, row.lhs, row.rhs } );
   {
      std::vector<Interval> rootBox;
      for( int j = 0; j < ntot; ++j )
         rootBox.push_back( Interval{ ext.lo[j], ext.hi[j] } );
      for( const ExtRow& row : ext.rows )
      {
         if( detectStructure( ext.dag, row.node, rootBox ).kind !=
             StructureKind::kLinear )
            continue;
         auto affine = extractAffine( ext.dag, row.node, ntot );
         assert( affine.has_value() );
         LpRow lpRow;
         for( int j = 0; j < ntot; ++j )
            if( affine->first[j] != 0.0 )
            {
               lpRow.cols.push_back( j );
               lpRow.vals.push_back( affine->first[j] );
            }
         lpRow.cols.push_back( row.slackVar );
         lpRow.vals.push_back( -1.0 );
         lpRow.lhs = lpRow.rhs = -affine->second;
         base.rows.push_back( std::move( lpRow ) );
      }
   }

   std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
   long seqCounter = 0;
   {
      Node root;
      for( int j = 0; j < ntot; ++j )
         root.box.push_back( Interval{ ext.lo[j], ext.hi[j] } );
      open.push( std::move( root ) );
   }

   double primal = infinity;
   double dual = -infinity;
   std::optional<std::vector<double>> incumbent;

   auto tryAccept = [&]( std::span<const double> candidate ) -> bool
   {
      assert( static_cast<int>( candidate.size() ) >= n );
      std::vector<double> point( candidate.begin(),
                                 candidate.begin() + n );
      for( int j = 0; j < n; ++j )
      {
         if( !instance.vars[j].integral )
            continue;
         double rounded = std::nearbyint( point[j] );
         if( std::fabs( point[j] - rounded ) > kFeasTol )
            return false;
         point[j] = rounded;
      }
      ViolationReport report = checkOriginalFeasibility( instance, point );
      if( report.maxViolation > kFeasTol )
         return false;
      double obj = instance.objValue( point );
      if( obj >= primal - kCutoffTol )
         return false;
      primal = obj;
      incumbent = std::move( point );
      logLine( "incumbent obj " + formatNumber( obj ) + " viol " +
               formatNumber( report.maxViolation ) );
      return true;
   };

   auto hardGapMet = [&]( double p, double d )
   {
      return std::fabs( p - d ) <=
             std::max( 1e-6, 1e-4 * std::fabs( p ) );
   };
   auto userGapMet = [&]( double p, double d )
   {
      if( !incumbent || std::isinf( d ) )
         return false;
      double gap = std::fabs( p - d );
      return gap <= params.gapAbs ||
             gap / std::max( { std::fabs( p ), std::fabs( d ), 1e-10 } ) <=
                 params.gapRel;
   };

   while( true )
   {
      if( open.empty() )
      {
         dual = incumbent ? primal : infinity;
         result.status = incumbent ? SolveStatus::kOptimal
                                   : SolveStatus::kInfeasible;
         break;
      }
      dual = std::max( dual, std::min( open.top().parentDual, primal ) );
      if( userGapMet( primal, dual ) )
      {
         result.status = hardGapMet( primal, dual )
                             ? SolveStatus::kOptimal
                             : SolveStatus::kGapLimit;
         break;
      }
      if( result.nodesProcessed >= params.nodeLimit )
      {
         result.status = SolveStatus::kNodeLimit;
         break;
      }
      if( elapsed() > params.timeLimit )
      {
         result.status = SolveStatus::kTimeLimit;
         break;
      }

      Node node = open.top();
      open.pop();
      ++result.nodesProcessed;
      if( node.parentDual >= primal - kCutoffTol )
         continue;

      // propagation rounds until the box stops improving
      bool nodeInfeasible = false;
      for( int round = 0; round < params.fbbtRounds; ++round )
      {
         std::vector<double> before( ntot );
         for( int j = 0; j < ntot; ++j )
            before[j] = node.box[j].width();
         for( const Propagator& propagate : registry.propagators )
            if( !propagate( instance, ext, node.box ) )
            {
               nodeInfeasible = true;
               break;
            }
         if( nodeInfeasible )
            break;
         double improvement = 0.0;
         for( int j = 0; j < ntot; ++j )
         {
            double after = node.box[j].width();
            if( std::isinf( before[j] ) )
               improvement = std::max(
                   improvement, std::isinf( after ) ? 0.0 : 1.0 );
            else if( before[j] > after )
               improvement =
                   std::max( improvement, ( before[j] - after ) /
                                              std::max( 1.0, before[j] ) );
         }
         if( improvement < 1e-3 )
            break;
      }
      if( nodeInfeasible )
      {
         logLine( "fathom " + std::to_string( node.seq ) +
                  " reason infeasible" );
         continue;
      }

      // LP with one separation round per solve
      LpProblem lp = base;
      for( int j = 0; j < ntot; ++j )
      {
         lp.lo[j] = node.box[j].lo;
         lp.hi[j] = node.box[j].hi;
      }
      for( const Cut& cut : node.cuts )
         lp.rows.push_back( LpRow{ cut.cols, cut.vals, cut.lhs, cut.rhs } );

      LpSolution sol;
      double nodeDual = node.parentDual;
      double lastObj = -infinity;
      bool pruned = false;
      for( int sepRound = 0;; ++sepRound )
      {
         sol = solveLp( lp );
         result.lpIterations += sol.iterations;
         if( sol.status == LpStatus::kIterationLimit )
            throw std::logic_error( "node LP hit the iteration limit" );
         if( sol.status == LpStatus::kUnbounded )
            throw std::logic_error(
                "node relaxation is unbounded; solve needs instances "
                "whose boxes bound the LP" );
         if( sol.status == LpStatus::kInfeasible )
         {
            pruned = true;
            logLine( "fathom " + std::to_string( node.seq ) +
                     " reason infeasible" );
            break;
         }
         nodeDual = std::max( nodeDual, sol.obj + instance.objOffset );
         tryAccept( sol.x );
         if( nodeDual >= primal - kCutoffTol )
         {
            pruned = true;
            logLine( "fathom " + std::to_string( node.seq ) +
                     " reason bound" );
            break;
         }
         // hard cap as a safeguard against slowly converging cut tails
         if( sepRound >= 50 )
            break;
         if( sepRound > 0 && sol.obj - lastObj < 1e-4 )
            break;
         lastObj = sol.obj;

         std::vector<Cut> candidates;
         for( const Separator& separate : registry.separators )
         {
            std::vector<Cut> found =
                separate( instance, ext, node.box, sol.x );
            candidates.insert( candidates.end(),
                               std::make_move_iterator( found.begin() ),
                               std::make_move_iterator( found.end() ) );
         }
         if( candidates.empty() )
            break;
         std::vector<int> picked =
             registry.cutSelector
                 ? registry.cutSelector( candidates,
                                         params.maxCutsPerRound )
                 : selectCuts( candidates, params.maxCutsPerRound );
         if( picked.empty() )
            break;
         for( int idx : picked )
         {
            const Cut& cut = candidates[idx];
            lp.rows.push_back(
                LpRow{ cut.cols, cut.vals, cut.lhs, cut.rhs } );
            node.cuts.push_back( cut );
         }
      }
      if( pruned )
         continue;

      double nodeViol = 0.0;
      for( const ExtRow& row : ext.rows )
         nodeViol = std::max( nodeViol,
                              extRowViolation( ext, row, sol.x ) );
      logLine( "node " + std::to_string( node.seq ) + " depth " +
               std::to_string( node.depth ) + " lb " +
               formatNumber( nodeDual ) + " primal " +
               formatNumber( primal ) + " dual " + formatNumber( dual ) +
               " viol " + formatNumber( nodeViol ) );

      for( const Heuristic& heuristic : registry.heuristics )
      {
         if( heuristic.rootOnly && node.depth > 0 )
            continue;
         auto candidate =
             heuristic.fn( instance, ext, node.box, sol.x );
         if( candidate )
            tryAccept( *candidate );
      }
      if( nodeDual >= primal - kCutoffTol )
      {
         logLine( "fathom " + std::to_string( node.seq ) +
                  " reason bound" );
         continue;
      }

      std::optional<Branching> branching;
      for( const BranchingSelector& select : registry.branchingSelectors )
      {
         branching = select( instance, ext, node.box, sol.x );
         if( branching )
            break;
      }
      if( !branching )
      {
         logLine( "fathom " + std::to_string( node.seq ) +
                  " reason converged" );
         continue;
      }

      int var = branching->var;
      double point = branching->point;
      logLine( "branch " + std::to_string( node.seq ) + " var " +
               ( var < n ? instance.vars[var].name
                         : std::string( "w" ) + std::to_string( var - n ) ) +
               " index " + std::to_string( var ) + " point " +
               formatNumber( point ) );

      Node left = node;
      Node right = std::move( node );
      left.depth = right.depth = left.depth + 1;
      left.parentDual = right.parentDual = nodeDual;
      if( var < n && instance.vars[var].integral )
      {
         double leftHi = std::floor( point );
         left.box[var].hi = leftHi;
         right.box[var].lo = leftHi + 1.0;
      }
      else
      {
         left.box[var].hi = point;
         right.box[var].lo = point;
      }
      if( !left.box[var].isEmpty() )
      {
         left.seq = ++seqCounter;
         open.push( std::move( left ) );
      }
      if( !right.box[var].isEmpty() )
      {
         right.seq = ++seqCounter;
         open.push( std::move( right ) );
      }
   }

   result.primalBound = primal;
   result.dualBound = dual;
   if( result.status == SolveStatus::kInfeasible )
      result.dualBound = infinity;
   result.incumbent = std::move( incumbent );
   result.seconds = elapsed();

   const char* word = "optimal";
   switch( result.status )
   {
   case SolveStatus::kOptimal:
      word = "optimal";
      break;
   case SolveStatus::kInfeasible:
      word = "infeasible";
      break;
   case SolveStatus::kGapLimit:
      word = "gap_limit";
      break;
   case SolveStatus::kNodeLimit:
      word = "node_limit";
      break;
   case SolveStatus::kTimeLimit:
      word = "time_limit";
      break;
   }
   logLine( "summary status " + std::string( word ) + " primal " +
            formatNumber( result.primalBound ) + " dual " +
            formatNumber( result.dualBound ) + " nodes " +
            std::to_string( result.nodesProcessed ) + " lpiters " +
            std::to_string( result.lpIterations ) );
   return result;
}

} // namespace minicip
