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

#include "minicip/decomp.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace minicip
{

namespace
{

std::vector<int>
rowVariables( const Instance& inst, int row )
{
   std::vector<int> vars;
   int numLin = static_cast<int>( inst.linRows.size() );
   if( row < numLin )
   {
      for( size_t k = 0; k < inst.linRows[row].cols.size(); ++k )
         if( inst.linRows[row].vals[k] != 0.0 )
            vars.push_back( inst.linRows[row].cols[k] );
      return vars;
   }
   const NonlinearRow& nl = inst.nlRows[static_cast<size_t>( row - numLin )];
   std::vector<char> mark = inst.dag.reachable( nl.root );
   for( int id = 0; id <= nl.root; ++id )
      if( mark[id] && inst.dag.node( id ).isVar() )
         vars.push_back( inst.dag.node( id ).varIndex );
   return vars;
}

} // namespace

std::vector<BlockViolation>
validateDecomposition( const Instance& inst, const Decomposition& dec )
{
   int numRows = static_cast<int>( inst.linRows.size() + inst.nlRows.size() );
   if( dec.numRows() != numRows ||
       static_cast<int>( dec.colLabel.size() ) != inst.numVars() )
      throw std::invalid_argument( "decomposition labels do not cover the "
                                   "instance" );

   std::vector<BlockViolation> violations;
   for( int r = 0; r < numRows; ++r )
   {
      int q1 = dec.rowLabel[static_cast<size_t>( r )];
      if( q1 == kLinking )
         continue;
      for( int j : rowVariables( inst, r ) )
      {
         int q2 = dec.colLabel[static_cast<size_t>( j )];
         if( q2 != kLinking && q2 != q1 )
            violations.push_back( { r, j } );
      }
   }
   return violations;
}

namespace
{

constexpr double kDonorTol = 1e-9;

/// restricts a row to the mapped variables; zero entries may reference
/// columns outside the block and are dropped
LinearRow
remapRow( const LinearRow& row, const std::vector<int>& varMap )
{
   LinearRow out;
   out.name = row.name;
   out.lhs = row.lhs;
   out.rhs = row.rhs;
   for( size_t i = 0; i < row.cols.size(); ++i )
   {
      if( row.vals[i] == 0.0 )
         continue;
      int mapped = varMap[static_cast<size_t>( row.cols[i] )];
      assert( mapped >= 0 );
      out.cols.push_back( mapped );
      out.vals.push_back( row.vals[i] );
   }
   return out;
}

void
checkLabelRanges( const Instance& inst, const Decomposition& dec )
{
   if( dec.k <= 0 )
      throw std::invalid_argument( "decomposition needs at least one block" );
   if( !validateDecomposition( inst, dec ).empty() )
      throw std::invalid_argument( "decomposition violates the block "
                                   "condition" );
   for( int q : dec.rowLabel )
      if( q != kLinking && ( q < 0 || q >= dec.k ) )
         throw std::invalid_argument( "row block label out of range" );
   for( int q : dec.colLabel )
      if( q != kLinking && ( q < 0 || q >= dec.k ) )
         throw std::invalid_argument( "column block label out of range" );
}

double
clampToBounds( double v, const Variable& var )
{
   double r = std::min( std::max( v, var.lo ), var.hi );
   if( var.integral )
      r = std::min( std::max( std::round( r ), var.lo ), var.hi );
   return r;
}

SolveParams
subsolveParams()
{
   SolveParams p;
   p.nodeLimit = 20000;
   p.log = nullptr;
   return p;
}

/// one-sided or equality linking rows a dps partition can represent
enum class LinkKind
{
   kGe,
   kLe,
   kEq
};

struct DpsSetup
{
   std::vector<int> linkRows;   ///< indices into linRows
   std::vector<LinkKind> kind;
   std::vector<double> side;    ///< the partitioned right hand side
   std::vector<std::vector<int>> blockCols;
   std::vector<std::vector<int>> blockLinRows;
   std::vector<std::vector<int>> blockNlRows;
   /// [link][block] row terms restricted to the block, and part bounds
   std::vector<std::vector<std::vector<std::pair<int, double>>>> terms;
   std::vector<std::vector<double>> partLb;
   std::vector<std::vector<double>> partUb;
};

DpsSetup
dpsValidate( const Instance& inst, const Decomposition& dec )
{
   checkLabelRanges( inst, dec );
   for( int j = 0; j < inst.numVars(); ++j )
      if( dec.colLabel[static_cast<size_t>( j )] == kLinking )
         throw std::invalid_argument( "dps requires every column in a block" );
   int numLin = static_cast<int>( inst.linRows.size() );
   for( size_t r = numLin; r < dec.rowLabel.size(); ++r )
      if( dec.rowLabel[r] == kLinking )
         throw std::invalid_argument( "dps cannot partition nonlinear rows" );

   DpsSetup setup;
   setup.blockCols.resize( static_cast<size_t>( dec.k ) );
   setup.blockLinRows.resize( static_cast<size_t>( dec.k ) );
   setup.blockNlRows.resize( static_cast<size_t>( dec.k ) );
   for( int j = 0; j < inst.numVars(); ++j )
      setup.blockCols[static_cast<size_t>( dec.colLabel[static_cast<size_t>( j )] )]
          .push_back( j );
   for( int r = 0; r < numLin; ++r )
   {
      int q = dec.rowLabel[static_cast<size_t>( r )];
      if( q != kLinking )
      {
         setup.blockLinRows[static_cast<size_t>( q )].push_back( r );
         continue;
      }
      const LinearRow& row = inst.linRows[static_cast<size_t>( r )];
      bool hasLo = row.lhs > -infinity;
      bool hasHi = row.rhs < infinity;
      if( !hasLo && !hasHi )
         continue;
      if( hasLo && hasHi && row.lhs != row.rhs )
         throw std::invalid_argument( "ranged linking rows are not supported" );
      setup.linkRows.push_back( r );
      if( hasLo && hasHi )
      {
         setup.kind.push_back( LinkKind::kEq );
         setup.side.push_back( row.lhs );
      }
      else if( hasLo )
      {
         setup.kind.push_back( LinkKind::kGe );
         setup.side.push_back( row.lhs );
      }
      else
      {
         setup.kind.push_back( LinkKind::kLe );
         setup.side.push_back( row.rhs );
      }
   }
   for( size_t r = 0; r < inst.nlRows.size(); ++r )
      setup.blockNlRows[static_cast<size_t>(
                            dec.rowLabel[static_cast<size_t>( numLin ) + r] )]
          .push_back( static_cast<int>( r ) );

   size_t L = setup.linkRows.size();
   setup.terms.assign( L, {} );
   setup.partLb.assign( L, std::vector<double>( static_cast<size_t>( dec.k ),
                                                0.0 ) );
   setup.partUb = setup.partLb;
   for( size_t t = 0; t < L; ++t )
   {
      const LinearRow& row =
          inst.linRows[static_cast<size_t>( setup.linkRows[t] )];
      setup.terms[t].resize( static_cast<size_t>( dec.k ) );
      for( size_t idx = 0; idx < row.cols.size(); ++idx )
      {
         double a = row.vals[idx];
         if( a == 0.0 )
            continue;
         int j = row.cols[idx];
         size_t q =
             static_cast<size_t>( dec.colLabel[static_cast<size_t>( j )] );
         setup.terms[t][q].emplace_back( j, a );
         const Variable& var = inst.vars[static_cast<size_t>( j )];
         if( a > 0.0 )
         {
            setup.partLb[t][q] += a * var.lo;
            setup.partUb[t][q] += a * var.hi;
         }
         else
         {
            setup.partLb[t][q] += a * var.hi;
            setup.partUb[t][q] += a * var.lo;
         }
      }
   }
   return setup;
}

/// block subproblem reused across iterations; only row sides and the slack
/// objective change
struct DpsBlock
{
   Instance sub;
   std::vector<int> cols;  ///< original column per leading subproblem variable
   std::vector<int> zVar;  ///< slack variable per linking row
   std::vector<int> loRow; ///< subproblem row holding the lower share side
   std::vector<int> hiRow;
};

DpsBlock
buildDpsBlock( const Instance& inst, const DpsSetup& setup, int block )
{
   DpsBlock out;
   size_t q = static_cast<size_t>( block );
   out.cols = setup.blockCols[q];
   std::vector<int> varMap( static_cast<size_t>( inst.numVars() ), -1 );
   for( size_t i = 0; i < out.cols.size(); ++i )
   {
      int j = out.cols[i];
      varMap[static_cast<size_t>( j )] = static_cast<int>( i );
      out.sub.vars.push_back( inst.vars[static_cast<size_t>( j )] );
   }
   size_t L = setup.linkRows.size();
   out.zVar.resize( L );
   for( size_t t = 0; t < L; ++t )
   {
      Variable z;
      z.name = "dps_z_" + std::to_string( t );
      z.lo = 0.0;
      out.zVar[t] = out.sub.numVars();
      out.sub.vars.push_back( z );
   }
   out.sub.name = inst.name + "_dps_" + std::to_string( block );
   out.sub.obj.assign( static_cast<size_t>( out.sub.numVars() ), 0.0 );

   for( int r : setup.blockLinRows[q] )
      out.sub.linRows.push_back(
          remapRow( inst.linRows[static_cast<size_t>( r )], varMap ) );
   for( int r : setup.blockNlRows[q] )
   {
      const NonlinearRow& nl = inst.nlRows[static_cast<size_t>( r )];
      NonlinearRow copy = nl;
      copy.root = inst.dag.copyTo( out.sub.dag, nl.root, varMap );
      out.sub.nlRows.push_back( std::move( copy ) );
   }

   out.loRow.assign( L, -1 );
   out.hiRow.assign( L, -1 );
   for( size_t t = 0; t < L; ++t )
   {
      std::vector<int> cols;
      std::vector<double> vals;
      for( const auto& [j, a] : setup.terms[t][q] )
      {
         cols.push_back( varMap[static_cast<size_t>( j )] );
         vals.push_back( a );
      }
      LinkKind kind = setup.kind[t];
      if( kind != LinkKind::kLe )
      {
         LinearRow part;
         part.name = "dps_partlo_" + std::to_string( t );
         part.cols = cols;
         part.vals = vals;
         part.cols.push_back( out.zVar[t] );
         part.vals.push_back( 1.0 );
         part.lhs = 0.0;
         out.loRow[t] = static_cast<int>( out.sub.linRows.size() );
         out.sub.linRows.push_back( std::move( part ) );
      }
      if( kind != LinkKind::kGe )
      {
         LinearRow part;
         part.name = "dps_parthi_" + std::to_string( t );
         part.cols = std::move( cols );
         part.vals = std::move( vals );
         part.cols.push_back( out.zVar[t] );
         part.vals.push_back( -1.0 );
         part.rhs = 0.0;
         out.hiRow[t] = static_cast<int>( out.sub.linRows.size() );
         out.sub.linRows.push_back( std::move( part ) );
      }
   }
   return out;
}

double
windowDistance( LinkKind kind, double part, double share )
{
   switch( kind )
   {
   case LinkKind::kGe:
      return std::max( 0.0, share - part );
   case LinkKind::kLe:
      return std::max( 0.0, part - share );
   default:
      return std::fabs( part - share );
   }
}

} // namespace

DecompResult
dps( const Instance& inst, const Decomposition& dec, const DecompParams& params,
     std::vector<DpsState>* trace )
{
   DpsSetup setup = dpsValidate( inst, dec );
   int k = dec.k;
   size_t L = setup.linkRows.size();
   int n = inst.numVars();

   std::vector<DpsBlock> blocks;
   blocks.reserve( static_cast<size_t>( k ) );
   for( int q = 0; q < k; ++q )
      blocks.push_back( buildDpsBlock( inst, setup, q ) );

   std::vector<std::vector<double>> share(
       static_cast<size_t>( k ), std::vector<double>( L ) );
   for( size_t t = 0; t < L; ++t )
      for( int q = 0; q < k; ++q )
         share[static_cast<size_t>( q )][t] = setup.side[t] / k;
   std::vector<double> lambda( L, 1.0 );

   std::vector<int> order( static_cast<size_t>( k ) );
   for( int q = 0; q < k; ++q )
      order[static_cast<size_t>( q )] = q;
   if( params.reverseBlockOrder )
      std::reverse( order.begin(), order.end() );

   DecompResult res;
   double bestTotal = infinity;
   int stalls = 0;
   SolveParams subParams = subsolveParams();

   for( int iter = 1; iter <= params.maxIters; ++iter )
   {
      res.iterations = iter;
      for( int q = 0; q < k; ++q )
      {
         DpsBlock& blk = blocks[static_cast<size_t>( q )];
         for( size_t t = 0; t < L; ++t )
         {
            double p = share[static_cast<size_t>( q )][t];
            if( blk.loRow[t] >= 0 )
               blk.sub.linRows[static_cast<size_t>( blk.loRow[t] )].lhs = p;
            if( blk.hiRow[t] >= 0 )
               blk.sub.linRows[static_cast<size_t>( blk.hiRow[t] )].rhs = p;
            blk.sub.obj[static_cast<size_t>( blk.zVar[t] )] = lambda[t];
         }
      }

      std::vector<SolveResult> sols( static_cast<size_t>( k ) );
#ifdef _OPENMP
      if( params.parallel )
      {
#pragma omp parallel for schedule( dynamic )
         for( int idx = 0; idx < k; ++idx )
         {
            int q = order[static_cast<size_t>( idx )];
            sols[static_cast<size_t>( q )] =
                solve( blocks[static_cast<size_t>( q )].sub, subParams );
         }
      }
      else
#endif
      {
         for( int idx = 0; idx < k; ++idx )
         {
            int q = order[static_cast<size_t>( idx )];
            sols[static_cast<size_t>( q )] =
                solve( blocks[static_cast<size_t>( q )].sub, subParams );
         }
      }

      for( int q = 0; q < k; ++q )
      {
         const SolveResult& sr = sols[static_cast<size_t>( q )];
         if( sr.status == SolveStatus::kInfeasible || !sr.incumbent )
            return res; // block rows alone are infeasible, or budget exhausted
      }

      std::vector<double> x( static_cast<size_t>( n ), 0.0 );
      for( int q = 0; q < k; ++q )
      {
         const DpsBlock& blk = blocks[static_cast<size_t>( q )];
         const std::vector<double>& sx = *sols[static_cast<size_t>( q )].incumbent;
         for( size_t i = 0; i < blk.cols.size(); ++i )
            x[static_cast<size_t>( blk.cols[i] )] = sx[i];
      }

      std::vector<std::vector<double>> part(
          static_cast<size_t>( k ), std::vector<double>( L, 0.0 ) );
      std::vector<std::vector<double>> resid = part;
      double total = 0.0;
      for( size_t t = 0; t < L; ++t )
         for( int q = 0; q < k; ++q )
         {
            double a = 0.0;
            for( const auto& [j, coef] : setup.terms[t][static_cast<size_t>( q )] )
               a += coef * x[static_cast<size_t>( j )];
            part[static_cast<size_t>( q )][t] = a;
            double v = windowDistance( setup.kind[t], a,
                                       share[static_cast<size_t>( q )][t] );
            resid[static_cast<size_t>( q )][t] = v;
            total += v;
         }

      if( params.log )
         *params.log << "dps iter " << iter << " slack " << total << "\n";

      double maxResid = 0.0;
      for( const auto& row : resid )
         for( double v : row )
            maxResid = std::max( maxResid, v );
      if( maxResid <= params.feasTol &&
          checkOriginalFeasibility( inst, x ).maxViolation <= params.feasTol )
      {
         res.found = true;
         res.x = std::move( x );
         res.objective = inst.objValue( res.x );
         return res;
      }

      // move shares toward what each deficit block actually achieved; donors
      // absorb the counterweight within the reach of their part bounds
      for( size_t t = 0; t < L; ++t )
      {
         double shift = 0.0;
         bool anyDeficit = false;
         std::vector<double> delta( static_cast<size_t>( k ), 0.0 );
         for( int q = 0; q < k; ++q )
            if( resid[static_cast<size_t>( q )][t] > kDonorTol )
            {
               delta[static_cast<size_t>( q )] =
                   part[static_cast<size_t>( q )][t] -
                   share[static_cast<size_t>( q )][t];
               shift += delta[static_cast<size_t>( q )];
               anyDeficit = true;
            }
         if( !anyDeficit )
            continue;
         double absShift = std::fabs( shift );
         if( absShift <= 1e-12 )
         {
            // pure reshuffle between deficit blocks; pin the sum exactly
            int first = -1;
            for( int q = 0; q < k; ++q )
               if( resid[static_cast<size_t>( q )][t] > kDonorTol )
               {
                  share[static_cast<size_t>( q )][t] +=
                      delta[static_cast<size_t>( q )];
                  if( first < 0 )
                     first = q;
               }
            share[static_cast<size_t>( first )][t] -= shift;
            continue;
         }
         bool up = shift < 0.0; // donors must take over the missing amount
         double headroomSum = 0.0;
         std::vector<double> headroom( static_cast<size_t>( k ), 0.0 );
         for( int q = 0; q < k; ++q )
         {
            if( resid[static_cast<size_t>( q )][t] > kDonorTol )
               continue;
            double room =
                up ? setup.partUb[t][static_cast<size_t>( q )] -
                         share[static_cast<size_t>( q )][t]
                   : share[static_cast<size_t>( q )][t] -
                         setup.partLb[t][static_cast<size_t>( q )];
            if( !( room < infinity ) )
               room = absShift;
            headroom[static_cast<size_t>( q )] =
                std::max( 0.0, std::min( room, absShift ) );
            headroomSum += headroom[static_cast<size_t>( q )];
         }
         if( headroomSum <= 0.0 )
            continue; // nothing can absorb the miss; the penalties react
         double frac = std::min( 1.0, headroomSum / absShift );
         for( int q = 0; q < k; ++q )
         {
            if( resid[static_cast<size_t>( q )][t] > kDonorTol )
               share[static_cast<size_t>( q )][t] +=
                   frac * delta[static_cast<size_t>( q )];
            else
               share[static_cast<size_t>( q )][t] -=
                   frac * shift * headroom[static_cast<size_t>( q )] /
                   headroomSum;
         }
      }

      if( total >= bestTotal - 1e-9 )
         ++stalls;
      else
      {
         stalls = 0;
         bestTotal = total;
      }
      if( stalls >= 3 )
      {
         for( size_t t = 0; t < L; ++t )
         {
            double rowSlack = 0.0;
            for( int q = 0; q < k; ++q )
               rowSlack += resid[static_cast<size_t>( q )][t];
            if( rowSlack > kDonorTol )
               lambda[t] *= 2.0;
         }
         stalls = 0;
      }

      if( trace )
      {
         DpsState state;
         state.partition = share;
         state.lambda = lambda;
         state.slack = resid;
         state.iteration = iter;
         trace->push_back( std::move( state ) );
      }
   }
   return res;
}

namespace
{

struct PadmSetup
{
   std::vector<int> linkCols;
   std::vector<std::vector<int>> blockCols;
   std::vector<std::vector<int>> blockLinRows;
   std::vector<std::vector<int>> blockNlRows;
   std::vector<std::vector<int>> touched; ///< [block] linking columns it reads
   std::vector<char> touchedAny;          ///< [var]
};

PadmSetup
padmValidate( const Instance& inst, const Decomposition& dec )
{
   checkLabelRanges( inst, dec );
   for( int q : dec.rowLabel )
      if( q == kLinking )
         throw std::invalid_argument( "padm requires every row in a block" );

   PadmSetup setup;
   setup.blockCols.resize( static_cast<size_t>( dec.k ) );
   setup.blockLinRows.resize( static_cast<size_t>( dec.k ) );
   setup.blockNlRows.resize( static_cast<size_t>( dec.k ) );
   setup.touched.resize( static_cast<size_t>( dec.k ) );
   setup.touchedAny.assign( static_cast<size_t>( inst.numVars() ), 0 );
   for( int j = 0; j < inst.numVars(); ++j )
   {
      int q = dec.colLabel[static_cast<size_t>( j )];
      if( q == kLinking )
         setup.linkCols.push_back( j );
      else
         setup.blockCols[static_cast<size_t>( q )].push_back( j );
   }
   int numLin = static_cast<int>( inst.linRows.size() );
   for( int r = 0; r < dec.numRows(); ++r )
   {
      size_t q = static_cast<size_t>( dec.rowLabel[static_cast<size_t>( r )] );
      if( r < numLin )
         setup.blockLinRows[q].push_back( r );
      else
         setup.blockNlRows[q].push_back( r - numLin );
      for( int j : rowVariables( inst, r ) )
         if( dec.colLabel[static_cast<size_t>( j )] == kLinking )
         {
            setup.touched[q].push_back( j );
            setup.touchedAny[static_cast<size_t>( j )] = 1;
         }
   }
   for( auto& list : setup.touched )
   {
      std::sort( list.begin(), list.end() );
      list.erase( std::unique( list.begin(), list.end() ), list.end() );
   }
   return setup;
}

/** Block subproblem over the block columns plus private copies of the
 *  linking variables the block touches. In penalty mode each copy carries a
 *  deviation split s+ - s- against the consensus value and the objective
 *  prices the splits; otherwise the copies are pinned by the caller and the
 *  original objective is kept on the block columns.
 */
struct PadmBlock
{
   Instance sub;
   std::vector<int> cols;
   std::vector<int> linkVars;
   std::vector<int> copyVar;
   std::vector<int> defRow;
   std::vector<int> sPlus;
   std::vector<int> sMinus;
};

PadmBlock
buildPadmBlock( const Instance& inst, const PadmSetup& setup, int block,
                bool penaltyMode )
{
   PadmBlock out;
   size_t q = static_cast<size_t>( block );
   out.cols = setup.blockCols[q];
   out.linkVars = setup.touched[q];
   std::vector<int> varMap( static_cast<size_t>( inst.numVars() ), -1 );
   for( size_t i = 0; i < out.cols.size(); ++i )
   {
      varMap[static_cast<size_t>( out.cols[i] )] = static_cast<int>( i );
      out.sub.vars.push_back( inst.vars[static_cast<size_t>( out.cols[i] )] );
   }
   for( int y : out.linkVars )
   {
      Variable copy = inst.vars[static_cast<size_t>( y )];
      copy.name = "padm_" + copy.name;
      varMap[static_cast<size_t>( y )] = out.sub.numVars();
      out.copyVar.push_back( out.sub.numVars() );
      out.sub.vars.push_back( std::move( copy ) );
   }
   if( penaltyMode )
   {
      for( int y : out.linkVars )
      {
         Variable split;
         split.lo = 0.0;
         split.name = "padm_sp_" + inst.vars[static_cast<size_t>( y )].name;
         out.sPlus.push_back( out.sub.numVars() );
         out.sub.vars.push_back( split );
         split.name = "padm_sm_" + inst.vars[static_cast<size_t>( y )].name;
         out.sMinus.push_back( out.sub.numVars() );
         out.sub.vars.push_back( split );
      }
   }
   out.sub.name = inst.name + "_padm_" + std::to_string( block );
   out.sub.obj.assign( static_cast<size_t>( out.sub.numVars() ), 0.0 );
   if( !penaltyMode )
      for( size_t i = 0; i < out.cols.size(); ++i )
         out.sub.obj[i] = inst.obj[static_cast<size_t>( out.cols[i] )];

   for( int r : setup.blockLinRows[q] )
      out.sub.linRows.push_back(
          remapRow( inst.linRows[static_cast<size_t>( r )], varMap ) );
   for( int r : setup.blockNlRows[q] )
   {
      const NonlinearRow& nl = inst.nlRows[static_cast<size_t>( r )];
      NonlinearRow copy = nl;
      copy.root = inst.dag.copyTo( out.sub.dag, nl.root, varMap );
      out.sub.nlRows.push_back( std::move( copy ) );
   }
   if( penaltyMode )
      for( size_t i = 0; i < out.linkVars.size(); ++i )
      {
         LinearRow def;
         def.name = "padm_def_" +
                    inst.vars[static_cast<size_t>( out.linkVars[i] )].name;
         def.cols = { out.copyVar[i], out.sPlus[i], out.sMinus[i] };
         def.vals = { 1.0, -1.0, 1.0 };
         def.lhs = 0.0;
         def.rhs = 0.0;
         out.defRow.push_back( static_cast<int>( out.sub.linRows.size() ) );
         out.sub.linRows.push_back( std::move( def ) );
      }
   return out;
}

/// per-block re-optimization with every linking variable pinned at its entry
/// in linkVals; returns NONE when a pinned block has no feasible point
std::optional<std::vector<double>>
padmFixAndOptimize( const Instance& inst, const PadmSetup& setup, int k,
                    const std::vector<double>& linkVals )
{
   std::vector<double> x( static_cast<size_t>( inst.numVars() ), 0.0 );
   for( int y : setup.linkCols )
      x[static_cast<size_t>( y )] = linkVals[static_cast<size_t>( y )];
   SolveParams subParams = subsolveParams();
   for( int q = 0; q < k; ++q )
   {
      PadmBlock blk = buildPadmBlock( inst, setup, q, false );
      for( size_t i = 0; i < blk.linkVars.size(); ++i )
      {
         double v = linkVals[static_cast<size_t>( blk.linkVars[i] )];
         Variable& copy = blk.sub.vars[static_cast<size_t>( blk.copyVar[i] )];
         copy.lo = v;
         copy.hi = v;
      }
      if( blk.sub.numVars() == 0 )
         continue;
      SolveResult sr = solve( blk.sub, subParams );
      if( !sr.incumbent )
         return std::nullopt;
      for( size_t i = 0; i < blk.cols.size(); ++i )
         x[static_cast<size_t>( blk.cols[i] )] = ( *sr.incumbent )[i];
   }
   return x;
}

/// value for a linking variable no block constrains: best bound by objective
/// sign, zero clamped into the box otherwise
double
pickUnconstrained( const Instance& inst, int y )
{
   const Variable& var = inst.vars[static_cast<size_t>( y )];
   double c = inst.obj[static_cast<size_t>( y )];
   if( c > 0.0 && var.lo > -infinity )
      return var.lo;
   if( c < 0.0 && var.hi < infinity )
      return var.hi;
   return clampToBounds( 0.0, var );
}

} // namespace

DecompResult
padm( const Instance& inst, const Decomposition& dec, const DecompParams& params,
      std::vector<PadmState>* trace )
{
   PadmSetup setup = padmValidate( inst, dec );
   int k = dec.k;
   int n = inst.numVars();
   double nan = std::numeric_limits<double>::quiet_NaN();

   std::vector<PadmBlock> blocks;
   blocks.reserve( static_cast<size_t>( k ) );
   for( int q = 0; q < k; ++q )
      blocks.push_back( buildPadmBlock( inst, setup, q, true ) );

   std::vector<double> cons( static_cast<size_t>( n ), 0.0 );
   std::vector<double> mu( static_cast<size_t>( n ), 0.0 );
   for( int y : setup.linkCols )
   {
      cons[static_cast<size_t>( y )] =
          clampToBounds( 0.0, inst.vars[static_cast<size_t>( y )] );
      mu[static_cast<size_t>( y )] = 1.0;
   }

   std::vector<int> order( static_cast<size_t>( k ) );
   for( int q = 0; q < k; ++q )
      order[static_cast<size_t>( q )] = q;
   if( params.reverseBlockOrder )
      std::reverse( order.begin(), order.end() );

   DecompResult res;
   SolveParams subParams = subsolveParams();
   std::vector<double> spread( static_cast<size_t>( n ), 0.0 );
   bool agreed = false;

   for( int outer = 1; outer <= params.maxOuter && !agreed; ++outer )
   {
      for( int inner = 1; inner <= params.maxInner; ++inner )
      {
         ++res.iterations;
         std::vector<std::vector<double>> copies(
             static_cast<size_t>( k ),
             std::vector<double>( static_cast<size_t>( n ), nan ) );
         for( int idx = 0; idx < k; ++idx )
         {
            int q = order[static_cast<size_t>( idx )];
            PadmBlock& blk = blocks[static_cast<size_t>( q )];
            for( size_t i = 0; i < blk.linkVars.size(); ++i )
            {
               size_t y = static_cast<size_t>( blk.linkVars[i] );
               LinearRow& def =
                   blk.sub.linRows[static_cast<size_t>( blk.defRow[i] )];
               def.lhs = cons[y];
               def.rhs = cons[y];
               blk.sub.obj[static_cast<size_t>( blk.sPlus[i] )] = mu[y];
               blk.sub.obj[static_cast<size_t>( blk.sMinus[i] )] = mu[y];
            }
            if( blk.sub.numVars() == 0 )
               continue;
            SolveResult sr = solve( blk.sub, subParams );
            if( !sr.incumbent )
               return res; // block rows cannot be met even with free copies
            for( size_t i = 0; i < blk.linkVars.size(); ++i )
            {
               size_t y = static_cast<size_t>( blk.linkVars[i] );
               double v = ( *sr.incumbent )[static_cast<size_t>( blk.copyVar[i] )];
               copies[static_cast<size_t>( q )][y] = v;
               cons[y] = v;
            }
         }

         double maxSpread = 0.0;
         for( int y : setup.linkCols )
         {
            double lo = infinity;
            double hi = -infinity;
            for( int q = 0; q < k; ++q )
            {
               double v = copies[static_cast<size_t>( q )][static_cast<size_t>( y )];
               if( !std::isnan( v ) )
               {
                  lo = std::min( lo, v );
                  hi = std::max( hi, v );
               }
            }
            spread[static_cast<size_t>( y )] = lo <= hi ? hi - lo : 0.0;
            maxSpread = std::max( maxSpread, spread[static_cast<size_t>( y )] );
         }
         if( params.log )
            *params.log << "padm outer " << outer << " sweep " << inner
                        << " spread " << maxSpread << "\n";
         if( trace )
         {
            PadmState state;
            state.copies = copies;
            state.mu = mu;
            state.sweep = inner;
            state.outer = outer;
            trace->push_back( std::move( state ) );
         }
         if( maxSpread <= params.feasTol )
         {
            agreed = true;
            break;
         }
      }
      if( !agreed )
         for( int y : setup.linkCols )
            if( spread[static_cast<size_t>( y )] > params.feasTol )
               mu[static_cast<size_t>( y )] *= 10.0;
   }
   if( !agreed )
      return res;

   std::vector<double> linkVals( static_cast<size_t>( n ), 0.0 );
   for( int y : setup.linkCols )
   {
      double v = setup.touchedAny[static_cast<size_t>( y )]
                     ? cons[static_cast<size_t>( y )]
                     : pickUnconstrained( inst, y );
      if( inst.vars[static_cast<size_t>( y )].integral )
         v = std::round( v );
      linkVals[static_cast<size_t>( y )] = v;
   }
   std::optional<std::vector<double>> x =
       padmFixAndOptimize( inst, setup, k, linkVals );
   if( x && checkOriginalFeasibility( inst, *x ).maxViolation <= params.feasTol )
   {
      res.found = true;
      res.x = std::move( *x );
      res.objective = inst.objValue( res.x );
   }
   return res;
}

std::vector<double>
dpsImprove( const Instance& inst, const Decomposition& dec,
            const std::vector<double>& solution, const DecompParams& params )
{
   dpsValidate( inst, dec );
   if( static_cast<int>( solution.size() ) != inst.numVars() )
      throw std::invalid_argument( "solution length does not match" );
   if( checkOriginalFeasibility( inst, solution ).maxViolation > params.feasTol )
      throw std::invalid_argument( "improvement requires a feasible point" );

   // the linking rows couple the blocks, so single-block re-solves with
   // frozen shares cannot leave the input point; re-optimize the whole
   // instance seeded with the input instead
   PluginRegistry registry = defaultRegistry();
   std::vector<double> seed = solution;
   registry.heuristics.push_back(
       { "warmstart", true,
         [seed]( const Instance&, const ExtendedForm&,
                 const std::vector<Interval>&, const std::vector<double>& )
             -> std::optional<std::vector<double>> { return seed; } } );
   SolveParams sp;
   sp.log = params.log;
   SolveResult r = solve( inst, sp, registry );
   if( r.incumbent &&
       inst.objValue( *r.incumbent ) < inst.objValue( solution ) - 1e-9 )
      return *r.incumbent;
   return solution;
}

std::vector<double>
padmImprove( const Instance& inst, const Decomposition& dec,
             const std::vector<double>& solution, const DecompParams& params )
{
   PadmSetup setup = padmValidate( inst, dec );
   if( static_cast<int>( solution.size() ) != inst.numVars() )
      throw std::invalid_argument( "solution length does not match" );
   if( checkOriginalFeasibility( inst, solution ).maxViolation > params.feasTol )
      throw std::invalid_argument( "improvement requires a feasible point" );

   std::vector<double> linkVals = solution;
   for( int y : setup.linkCols )
      if( inst.vars[static_cast<size_t>( y )].integral )
         linkVals[static_cast<size_t>( y )] =
             std::round( linkVals[static_cast<size_t>( y )] );
   std::optional<std::vector<double>> x =
       padmFixAndOptimize( inst, setup, dec.k, linkVals );
   if( x && checkOriginalFeasibility( inst, *x ).maxViolation <= params.feasTol &&
       inst.objValue( *x ) < inst.objValue( solution ) - 1e-9 )
      return *x;
   return solution;
}

Heuristic
makeDpsHeuristic( Decomposition dec, DecompParams params )
{
   HeuristicFn fn = [dec = std::move( dec ), params](
                        const Instance& inst, const ExtendedForm&,
                        const std::vector<Interval>&,
                        const std::vector<double>& )
       -> std::optional<std::vector<double>>
   {
      DecompResult r = dps( inst, dec, params );
      if( r.found )
         return std::move( r.x );
      return std::nullopt;
   };
   return { "dps", true, std::move( fn ) };
}

Heuristic
makePadmHeuristic( Decomposition dec, DecompParams params )
{
   HeuristicFn fn = [dec = std::move( dec ), params](
                        const Instance& inst, const ExtendedForm&,
                        const std::vector<Interval>&,
                        const std::vector<double>& )
       -> std::optional<std::vector<double>>
   {
      DecompResult r = padm( inst, dec, params );
      if( r.found )
         return std::move( r.x );
      return std::nullopt;
   };
   return { "padm", true, std::move( fn ) };
}

} // namespace minicip
