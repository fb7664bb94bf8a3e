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

#include "minicip/presolve.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace minicip
{

namespace
{

/// a row/column conflict is declared only against bounds violated by more
/// than this margin; smaller gaps are treated as roundoff
constexpr double kInfeasMargin = 1e-7;

/** Mutable presolve state in original index space. Rows and columns are
 *  deactivated instead of erased so reduction records can keep original
 *  indices; entries of inactive columns are removed from active rows at
 *  application time, which compaction relies on.
 */
struct Work
{
   Instance inst;
   std::vector<char> colActive;
   std::vector<char> rowActive;
   std::vector<char> wasFixed;
   std::vector<double> fixedVal;
   std::vector<char> colInNl;
};

Work
makeWork( const Instance& instance )
{
   Work work;
   work.inst = instance;
   int n = instance.numVars();
   work.colActive.assign( n, 1 );
   work.rowActive.assign( instance.linRows.size(), 1 );
   work.wasFixed.assign( n, 0 );
   work.fixedVal.assign( n, 0.0 );
   work.colInNl.assign( n, 0 );
   for( const NonlinearRow& nl : instance.nlRows )
   {
      std::vector<char> reach = instance.dag.reachable( nl.root );
      for( int id = 0; id < instance.dag.numNodes(); ++id )
         if( reach[id] && instance.dag.node( id ).isVar() )
            work.colInNl[instance.dag.node( id ).varIndex] = 1;
   }
   // merge duplicate column entries and drop explicit zeros so every
   // active row holds at most one nonzero entry per column
   for( LinearRow& row : work.inst.linRows )
   {
      std::vector<int> cols;
      std::vector<double> vals;
      for( size_t k = 0; k < row.cols.size(); ++k )
      {
         size_t pos = 0;
         for( ; pos < cols.size(); ++pos )
            if( cols[pos] == row.cols[k] )
               break;
         if( pos < cols.size() )
            vals[pos] += row.vals[k];
         else
         {
            cols.push_back( row.cols[k] );
            vals.push_back( row.vals[k] );
         }
      }
      row.cols.clear();
      row.vals.clear();
      for( size_t k = 0; k < cols.size(); ++k )
         if( vals[k] != 0.0 )
         {
            row.cols.push_back( cols[k] );
            row.vals.push_back( vals[k] );
         }
   }
   return work;
}

void
removeColEntry( LinearRow& row, int col )
{
   for( size_t k = 0; k < row.cols.size(); ++k )
      if( row.cols[k] == col )
      {
         row.cols.erase( row.cols.begin() + static_cast<long>( k ) );
         row.vals.erase( row.vals.begin() + static_cast<long>( k ) );
         return;
      }
   assert( false );
}

void
shiftSides( LinearRow& row, double delta )
{
   if( row.lhs > -infinity )
      row.lhs -= delta;
   if( row.rhs < infinity )
      row.rhs -= delta;
}

void
applyReduction( Work& work, const Reduction& red )
{
   switch( red.kind )
   {
   case ReductionKind::kFixVar:
   {
      work.colActive[red.col] = 0;
      work.wasFixed[red.col] = 1;
      work.fixedVal[red.col] = red.value;
      work.inst.objOffset += red.objCoef * red.value;
      work.inst.obj[red.col] = 0.0;
      for( size_t s = 0; s < red.hitRows.size(); ++s )
      {
         LinearRow& row = work.inst.linRows[red.hitRows[s]];
         removeColEntry( row, red.col );
         shiftSides( row, red.hitVals[s] * red.value );
      }
      break;
   }
   case ReductionKind::kTightenBound:
   {
      if( red.upper )
         work.inst.vars[red.col].hi = red.value;
      else
         work.inst.vars[red.col].lo = red.value;
      break;
   }
   case ReductionKind::kSubstituteVar:
   {
      work.colActive[red.col] = 0;
      work.rowActive[red.row] = 0;
      for( size_t s = 0; s < red.hitRows.size(); ++s )
      {
         LinearRow& row = work.inst.linRows[red.hitRows[s]];
         double asj = red.hitVals[s];
         size_t pos = 0;
         for( ; pos < row.cols.size(); ++pos )
            if( row.cols[pos] == red.withCol )
               break;
         if( pos < row.cols.size() )
         {
            row.vals[pos] += asj * red.alpha;
            if( row.vals[pos] == 0.0 )
            {
               row.cols.erase( row.cols.begin() + static_cast<long>( pos ) );
               row.vals.erase( row.vals.begin() + static_cast<long>( pos ) );
            }
         }
         else if( asj * red.alpha != 0.0 )
         {
            row.cols.push_back( red.withCol );
            row.vals.push_back( asj * red.alpha );
         }
         removeColEntry( row, red.col );
         shiftSides( row, asj * red.beta );
      }
      work.inst.obj[red.withCol] += red.objCoef * red.alpha;
      work.inst.objOffset += red.objCoef * red.beta;
      work.inst.obj[red.col] = 0.0;
      break;
   }
   case ReductionKind::kDeleteRedundantRow:
   {
      work.rowActive[red.row] = 0;
      break;
   }
   case ReductionKind::kScaleRow:
   {
      assert( red.value != 0.0 );
      LinearRow& row = work.inst.linRows[red.row];
      for( double& v : row.vals )
         v *= red.value;
      double lhs = row.lhs;
      double rhs = row.rhs;
      if( red.value > 0.0 )
      {
         row.lhs = lhs > -infinity ? lhs * red.value : -infinity;
         row.rhs = rhs < infinity ? rhs * red.value : infinity;
      }
      else
      {
         row.lhs = rhs < infinity ? rhs * red.value : -infinity;
         row.rhs = lhs > -infinity ? lhs * red.value : infinity;
      }
      break;
   }
   }
}

/// transaction proposed by one presolver against the round snapshot
struct Candidate
{
   Reduction red;
   bool infeasible = false;
};

/// active rows holding each active column, with the coefficient there
std::vector<std::vector<std::pair<int, double>>>
buildColRows( const Work& work )
{
   std::vector<std::vector<std::pair<int, double>>> colRows(
       work.inst.numVars() );
   for( size_t r = 0; r < work.inst.linRows.size(); ++r )
   {
      if( !work.rowActive[r] )
         continue;
      const LinearRow& row = work.inst.linRows[r];
      for( size_t k = 0; k < row.cols.size(); ++k )
         colRows[row.cols[k]].emplace_back( static_cast<int>( r ),
                                            row.vals[k] );
   }
   return colRows;
}

double
boundContribution( double coef, const Variable& var, bool lower )
{
   double bound = ( coef > 0.0 ) == lower ? var.lo : var.hi;
   if( bound <= -infinity )
      return coef > 0.0 ? -infinity : infinity;
   if( bound >= infinity )
      return coef > 0.0 ? infinity : -infinity;
   return coef * bound;
}

/** Bound tightening from row activities, redundant row deletion, integral
 *  bound rounding, and infeasibility certificates.
 */
std::vector<Candidate>
presolveBounds( const Work& work, double tol )
{
   std::vector<Candidate> out;
   const Instance& inst = work.inst;
   for( int j = 0; j < inst.numVars(); ++j )
   {
      if( !work.colActive[j] )
         continue;
      const Variable& var = inst.vars[j];
      if( var.lo > var.hi + kInfeasMargin )
      {
         Candidate cand;
         cand.infeasible = true;
         cand.red.kind = ReductionKind::kTightenBound;
         cand.red.col = j;
         cand.red.oldLo = var.lo;
         cand.red.oldHi = var.hi;
         out.push_back( std::move( cand ) );
         return out;
      }
      if( !var.integral )
         continue;
      // round fractional integral bounds; no deriving row is recorded
      double rlo = var.lo > -infinity ? std::ceil( var.lo - tol ) : var.lo;
      double rhi = var.hi < infinity ? std::floor( var.hi + tol ) : var.hi;
      if( rlo > rhi + 0.5 )
      {
         Candidate cand;
         cand.infeasible = true;
         cand.red.kind = ReductionKind::kTightenBound;
         cand.red.col = j;
         cand.red.oldLo = var.lo;
         cand.red.oldHi = var.hi;
         out.push_back( std::move( cand ) );
         return out;
      }
      if( rlo > var.lo + tol )
      {
         Candidate cand;
         cand.red.kind = ReductionKind::kTightenBound;
         cand.red.col = j;
         cand.red.upper = false;
         cand.red.value = rlo;
         cand.red.oldLo = var.lo;
         cand.red.oldHi = var.hi;
         cand.red.touchedCols.push_back( j );
         out.push_back( std::move( cand ) );
      }
      if( rhi < var.hi - tol )
      {
         Candidate cand;
         cand.red.kind = ReductionKind::kTightenBound;
         cand.red.col = j;
         cand.red.upper = true;
         cand.red.value = rhi;
         cand.red.oldLo = var.lo;
         cand.red.oldHi = var.hi;
         cand.red.touchedCols.push_back( j );
         out.push_back( std::move( cand ) );
      }
   }
   for( size_t r = 0; r < inst.linRows.size(); ++r )
   {
      if( !work.rowActive[r] )
         continue;
      const LinearRow& row = inst.linRows[r];
      double minAct = 0.0;
      double maxAct = 0.0;
      for( size_t k = 0; k < row.cols.size(); ++k )
      {
         minAct += boundContribution( row.vals[k], inst.vars[row.cols[k]],
                                      true );
         maxAct += boundContribution( row.vals[k], inst.vars[row.cols[k]],
                                      false );
      }
      bool infeasLow = row.rhs < infinity && minAct > row.rhs + kInfeasMargin;
      bool infeasHigh =
          row.lhs > -infinity && maxAct < row.lhs - kInfeasMargin;
      if( infeasLow || infeasHigh )
      {
         Candidate cand;
         cand.infeasible = true;
         cand.red.kind = ReductionKind::kDeleteRedundantRow;
         cand.red.row = static_cast<int>( r );
         cand.red.rowCols = row.cols;
         cand.red.rowVals = row.vals;
         cand.red.rowLhs = row.lhs;
         cand.red.rowRhs = row.rhs;
         out.push_back( std::move( cand ) );
         return out;
      }
      bool lowRedundant = row.lhs <= -infinity || minAct >= row.lhs - tol;
      bool highRedundant = row.rhs >= infinity || maxAct <= row.rhs + tol;
      if( lowRedundant && highRedundant )
      {
         Candidate cand;
         cand.red.kind = ReductionKind::kDeleteRedundantRow;
         cand.red.row = static_cast<int>( r );
         cand.red.rowCols = row.cols;
         cand.red.rowVals = row.vals;
         cand.red.rowLhs = row.lhs;
         cand.red.rowRhs = row.rhs;
         cand.red.touchedRows.push_back( static_cast<int>( r ) );
         cand.red.touchedCols = row.cols;
         out.push_back( std::move( cand ) );
         continue;
      }
      for( size_t k = 0; k < row.cols.size(); ++k )
      {
         int j = row.cols[k];
         double a = row.vals[k];
         const Variable& var = inst.vars[j];
         double minRest = 0.0;
         double maxRest = 0.0;
         for( size_t i = 0; i < row.cols.size(); ++i )
         {
            if( i == k )
               continue;
            minRest += boundContribution( row.vals[i],
                                          inst.vars[row.cols[i]], true );
            maxRest += boundContribution( row.vals[i],
                                          inst.vars[row.cols[i]], false );
         }
         for( int side = 0; side < 2; ++side )
         {
            bool fromRhs = side == 0;
            double rest = fromRhs ? minRest : maxRest;
            double bound = fromRhs ? row.rhs : row.lhs;
            if( std::fabs( rest ) >= infinity ||
                std::fabs( bound ) >= infinity )
               continue;
            double implied = ( bound - rest ) / a;
            bool upper = fromRhs == ( a > 0.0 );
            Candidate cand;
            cand.red.kind = ReductionKind::kTightenBound;
            cand.red.col = j;
            cand.red.row = static_cast<int>( r );
            cand.red.coef = a;
            cand.red.upper = upper;
            cand.red.oldLo = var.lo;
            cand.red.oldHi = var.hi;
            if( upper )
            {
               double value = var.integral ? std::floor( implied + tol )
                                           : implied;
               if( value >= var.hi - tol )
                  continue;
               if( value < var.lo - kInfeasMargin )
               {
                  cand.infeasible = true;
                  out.push_back( std::move( cand ) );
                  return out;
               }
               cand.red.value = std::max( value, var.lo );
            }
            else
            {
               double value = var.integral ? std::ceil( implied - tol )
                                           : implied;
               if( value <= var.lo + tol )
                  continue;
               if( value > var.hi + kInfeasMargin )
               {
                  cand.infeasible = true;
                  out.push_back( std::move( cand ) );
                  return out;
               }
               cand.red.value = std::min( value, var.hi );
            }
            cand.red.rowCols = row.cols;
            cand.red.rowVals = row.vals;
            cand.red.touchedRows.push_back( static_cast<int>( r ) );
            cand.red.touchedCols = row.cols;
            out.push_back( std::move( cand ) );
         }
      }
   }
   return out;
}

Candidate
makeFix( const Work& work,
         const std::vector<std::vector<std::pair<int, double>>>& colRows,
         int j, double value )
{
   Candidate cand;
   cand.red.kind = ReductionKind::kFixVar;
   cand.red.col = j;
   cand.red.value = value;
   cand.red.oldLo = work.inst.vars[j].lo;
   cand.red.oldHi = work.inst.vars[j].hi;
   cand.red.objCoef = work.inst.obj[j];
   for( const auto& [r, a] : colRows[j] )
   {
      cand.red.hitRows.push_back( r );
      cand.red.hitVals.push_back( a );
      cand.red.touchedRows.push_back( r );
   }
   cand.red.touchedCols.push_back( j );
   return cand;
}

/// removal of columns whose bounds already coincide
std::vector<Candidate>
presolveFixed( const Work& work,
               const std::vector<std::vector<std::pair<int, double>>>& colRows,
               double tol )
{
   std::vector<Candidate> out;
   for( int j = 0; j < work.inst.numVars(); ++j )
   {
      if( !work.colActive[j] )
         continue;
      const Variable& var = work.inst.vars[j];
      if( var.lo <= -infinity || var.hi >= infinity ||
          std::fabs( var.hi - var.lo ) > tol )
         continue;
      double value = var.integral ? std::round( var.lo ) : var.lo;
      out.push_back( makeFix( work, colRows, j, value ) );
   }
   return out;
}

/// range of (b - ak * xk) / aj over xk's box, for the implied-free test
std::pair<double, double>
impliedRange( double b, double ak, double aj, const Variable& k )
{
   double atLo = k.lo <= -infinity
                     ? ( ak / aj > 0.0 ? infinity : -infinity )
                     : ( b - ak * k.lo ) / aj;
   double atHi = k.hi >= infinity
                     ? ( ak / aj > 0.0 ? -infinity : infinity )
                     : ( b - ak * k.hi ) / aj;
   return { std::min( atLo, atHi ), std::max( atLo, atHi ) };
}

bool
impliedFree( double b, double ak, double aj, const Variable& j,
             const Variable& k, double tol )
{
   auto [m, M] = impliedRange( b, ak, aj, k );
   if( m < j.lo - tol || M > j.hi + tol )
      return false;
   return true;
}

bool
nearInteger( double v, double tol )
{
   return std::fabs( v - std::round( v ) ) <= tol;
}

bool
substitutionKeepsIntegrality( const Variable& j, const Variable& k,
                              double alpha, double beta, double tol )
{
   if( !j.integral )
      return true;
   return k.integral && nearInteger( alpha, tol ) && nearInteger( beta, tol );
}

Candidate
makeSubstitution( const Work& work, const LinearRow& row, int r, int j,
                  double aj, int k, double ak,
                  const std::vector<std::pair<int, double>>& jRows )
{
   Candidate cand;
   cand.red.kind = ReductionKind::kSubstituteVar;
   cand.red.col = j;
   cand.red.withCol = k;
   cand.red.row = r;
   cand.red.coef = aj;
   cand.red.alpha = -ak / aj;
   cand.red.beta = row.rhs / aj;
   cand.red.objCoef = work.inst.obj[j];
   cand.red.oldLo = work.inst.vars[j].lo;
   cand.red.oldHi = work.inst.vars[j].hi;
   cand.red.rowCols = row.cols;
   cand.red.rowVals = row.vals;
   cand.red.rowLhs = row.lhs;
   cand.red.rowRhs = row.rhs;
   cand.red.touchedRows.push_back( r );
   for( const auto& [s, asj] : jRows )
      if( s != r )
      {
         cand.red.hitRows.push_back( s );
         cand.red.hitVals.push_back( asj );
         cand.red.touchedRows.push_back( s );
      }
   cand.red.touchedCols.push_back( j );
   cand.red.touchedCols.push_back( k );
   return cand;
}

bool
substitutable( const Work& work, const LinearRow& row, int j, double aj,
               int k, double ak, double tol )
{
   if( work.colInNl[j] )
      return false;
   const Variable& vj = work.inst.vars[j];
   const Variable& vk = work.inst.vars[k];
   if( !impliedFree( row.rhs, ak, aj, vj, vk, tol ) )
      return false;
   return substitutionKeepsIntegrality( vj, vk, -ak / aj, row.rhs / aj, tol );
}

/** Substitution of a column appearing in exactly one active row, when that
 *  row is a two-column equality and the column's bounds are implied by the
 *  partner's box.
 */
std::vector<Candidate>
presolveSingletonCols(
    const Work& work,
    const std::vector<std::vector<std::pair<int, double>>>& colRows,
    double tol )
{
   std::vector<Candidate> out;
   for( int j = 0; j < work.inst.numVars(); ++j )
   {
      if( !work.colActive[j] || colRows[j].size() != 1 )
         continue;
      int r = colRows[j][0].first;
      double aj = colRows[j][0].second;
      const LinearRow& row = work.inst.linRows[r];
      if( row.lhs != row.rhs || row.lhs <= -infinity ||
          row.cols.size() != 2 )
         continue;
      int k = row.cols[0] == j ? row.cols[1] : row.cols[0];
      double ak = row.coefficient( k );
      if( !substitutable( work, row, j, aj, k, ak, tol ) )
         continue;
      out.push_back( makeSubstitution( work, row, r, j, aj, k, ak,
                                       colRows[j] ) );
   }
   return out;
}

/** Substitution from a general two-column equality row; the eliminated
 *  column may appear in further rows, which are rewritten.
 */
std::vector<Candidate>
presolveDoubletonEqs(
    const Work& work,
    const std::vector<std::vector<std::pair<int, double>>>& colRows,
    double tol )
{
   std::vector<Candidate> out;
   for( size_t r = 0; r < work.inst.linRows.size(); ++r )
   {
      if( !work.rowActive[r] )
         continue;
      const LinearRow& row = work.inst.linRows[r];
      if( row.lhs != row.rhs || row.lhs <= -infinity ||
          row.cols.size() != 2 )
         continue;
      int c0 = row.cols[0];
      int c1 = row.cols[1];
      int first = std::min( c0, c1 );
      int second = std::max( c0, c1 );
      for( int j : { first, second } )
      {
         int k = j == c0 ? c1 : c0;
         double aj = row.coefficient( j );
         double ak = row.coefficient( k );
         if( !substitutable( work, row, j, aj, k, ak, tol ) )
            continue;
         out.push_back( makeSubstitution( work, row, static_cast<int>( r ),
                                          j, aj, k, ak, colRows[j] ) );
         break;
      }
   }
   return out;
}

/** Fixing a column at a bound when the objective and every row side it
 *  meets agree that moving toward the bound never hurts.
 */
std::vector<Candidate>
presolveDualFix(
    const Work& work,
    const std::vector<std::vector<std::pair<int, double>>>& colRows,
    double tol )
{
   std::vector<Candidate> out;
   for( int j = 0; j < work.inst.numVars(); ++j )
   {
      if( !work.colActive[j] || work.colInNl[j] )
         continue;
      const Variable& var = work.inst.vars[j];
      if( var.hi - var.lo <= tol )
         continue;
      double c = work.inst.obj[j];
      bool downFree = c >= 0.0;
      bool upFree = c <= 0.0;
      for( const auto& [r, a] : colRows[j] )
      {
         const LinearRow& row = work.inst.linRows[r];
         if( a > 0.0 )
         {
            if( row.lhs > -infinity )
               downFree = false;
            if( row.rhs < infinity )
               upFree = false;
         }
         else
         {
            if( row.rhs < infinity )
               downFree = false;
            if( row.lhs > -infinity )
               upFree = false;
         }
         if( !downFree && !upFree )
            break;
      }
      if( downFree && var.lo > -infinity )
      {
         double value = var.integral ? std::ceil( var.lo - tol ) : var.lo;
         out.push_back( makeFix( work, colRows, j, value ) );
      }
      else if( upFree && var.hi < infinity )
      {
         double value = var.integral ? std::floor( var.hi + tol ) : var.hi;
         out.push_back( makeFix( work, colRows, j, value ) );
      }
      else if( c == 0.0 && downFree && upFree )
      {
         // both directions free and both bounds infinite
         out.push_back( makeFix( work, colRows, j, 0.0 ) );
      }
   }
   return out;
}

std::vector<Candidate>
evalPresolver( int which, const Work& work,
               const std::vector<std::vector<std::pair<int, double>>>& colRows,
               double tol )
{
   switch( which )
   {
   case 0:
      return presolveBounds( work, tol );
   case 1:
      return presolveFixed( work, colRows, tol );
   case 2:
      return presolveSingletonCols( work, colRows, tol );
   case 3:
      return presolveDoubletonEqs( work, colRows, tol );
   default:
      return presolveDualFix( work, colRows, tol );
   }
}

/// rows and columns mutated by an applied reduction
void
markModified( const Reduction& red, std::vector<char>& modRow,
              std::vector<char>& modCol )
{
   switch( red.kind )
   {
   case ReductionKind::kFixVar:
      modCol[red.col] = 1;
      for( int r : red.hitRows )
         modRow[r] = 1;
      break;
   case ReductionKind::kTightenBound:
      modCol[red.col] = 1;
      break;
   case ReductionKind::kSubstituteVar:
      modCol[red.col] = 1;
      modCol[red.withCol] = 1;
      modRow[red.row] = 1;
      for( int r : red.hitRows )
         modRow[r] = 1;
      break;
   case ReductionKind::kDeleteRedundantRow:
      modRow[red.row] = 1;
      break;
   case ReductionKind::kScaleRow:
      modRow[red.row] = 1;
      break;
   }
}

bool
conflicts( const Reduction& red, const std::vector<char>& modRow,
           const std::vector<char>& modCol )
{
   for( int r : red.touchedRows )
      if( modRow[r] )
         return true;
   for( int c : red.touchedCols )
      if( modCol[c] )
         return true;
   return false;
}

/// dense reduced instance from the active part, with fixed columns folded
/// into the nonlinear expression graph as constants
Instance
compact( const Work& work, std::vector<int>& colMap,
         std::vector<int>& rowMap )
{
   const Instance& inst = work.inst;
   colMap.assign( inst.numVars(), -1 );
   rowMap.assign( inst.linRows.size(), -1 );
   Instance out;
   out.name = inst.name;
   out.objOffset = inst.objOffset;
   for( int j = 0; j < inst.numVars(); ++j )
      if( work.colActive[j] )
      {
         colMap[j] = static_cast<int>( out.vars.size() );
         out.vars.push_back( inst.vars[j] );
         out.obj.push_back( inst.obj[j] );
      }
   for( size_t r = 0; r < inst.linRows.size(); ++r )
   {
      if( !work.rowActive[r] )
         continue;
      rowMap[r] = static_cast<int>( out.linRows.size() );
      const LinearRow& row = inst.linRows[r];
      LinearRow mapped;
      mapped.name = row.name;
      mapped.lhs = row.lhs;
      mapped.rhs = row.rhs;
      for( size_t k = 0; k < row.cols.size(); ++k )
      {
         assert( work.colActive[row.cols[k]] );
         mapped.cols.push_back( colMap[row.cols[k]] );
         mapped.vals.push_back( row.vals[k] );
      }
      out.linRows.push_back( std::move( mapped ) );
   }
   for( const NonlinearRow& nl : inst.nlRows )
   {
      NonlinearRow mapped;
      mapped.name = nl.name;
      mapped.lhs = nl.lhs;
      mapped.rhs = nl.rhs;
      mapped.root = inst.dag.substituteTo( out.dag, nl.root, colMap,
                                           work.fixedVal );
      out.dag.addRoot( mapped.root );
      out.nlRows.push_back( std::move( mapped ) );
   }
   return out;
}

} // namespace

PresolveResult
runPresolve( const Instance& instance, const PresolveParams& params )
{
   Work work = makeWork( instance );
   PresolveResult result;
   result.stack.originalCols = instance.numVars();
   result.stack.originalRows = static_cast<int>( instance.linRows.size() );
   for( int round = 0; round < params.maxRounds; ++round )
   {
      result.stats.rounds = round + 1;
      auto colRows = buildColRows( work );
      std::array<std::vector<Candidate>, 5> slots;
      if( params.parallel )
      {
#ifdef _OPENMP
#pragma omp parallel for schedule( dynamic )
#endif
         for( int p = 0; p < 5; ++p )
            slots[p] = evalPresolver( p, work, colRows, params.tol );
      }
      else
      {
         for( int p = 0; p < 5; ++p )
            slots[p] = evalPresolver( p, work, colRows, params.tol );
      }
      std::vector<char> modRow( work.inst.linRows.size(), 0 );
      std::vector<char> modCol( work.inst.numVars(), 0 );
      long appliedThisRound = 0;
      for( int p = 0; p < 5; ++p )
      {
         for( Candidate& cand : slots[p] )
         {
            if( cand.infeasible )
            {
               result.status = PresolveStatus::kInfeasible;
               result.certificate = std::move( cand.red );
               result.reduced = compact( work, result.stack.colMap,
                                         result.stack.rowMap );
               return result;
            }
            if( conflicts( cand.red, modRow, modCol ) )
            {
               ++result.stats.rejected;
               continue;
            }
            applyReduction( work, cand.red );
            markModified( cand.red, modRow, modCol );
            ++result.stats.applied;
            ++result.stats.byKind[static_cast<size_t>( cand.red.kind )];
            result.stack.log.push_back( std::move( cand.red ) );
            ++appliedThisRound;
         }
      }
      if( appliedThisRound == 0 )
         break;
   }
   result.reduced = compact( work, result.stack.colMap, result.stack.rowMap );
   return result;
}

Instance
replayStack( const Instance& original, const PostsolveStack& stack )
{
   if( original.numVars() != stack.originalCols ||
       static_cast<int>( original.linRows.size() ) != stack.originalRows )
      throw std::invalid_argument( "replayStack: instance shape mismatch" );
   Work work = makeWork( original );
   for( const Reduction& red : stack.log )
      applyReduction( work, red );
   std::vector<int> colMap;
   std::vector<int> rowMap;
   return compact( work, colMap, rowMap );
}

std::vector<double>
postsolvePrimal( const PostsolveStack& stack,
                 const std::vector<double>& reducedX )
{
   std::vector<double> x( stack.originalCols, 0.0 );
   for( int j = 0; j < stack.originalCols; ++j )
      if( stack.colMap[j] >= 0 )
         x[j] = reducedX[stack.colMap[j]];
   for( auto it = stack.log.rbegin(); it != stack.log.rend(); ++it )
   {
      const Reduction& red = *it;
      if( red.kind == ReductionKind::kFixVar )
         x[red.col] = red.value;
      else if( red.kind == ReductionKind::kSubstituteVar )
         x[red.col] = red.alpha * x[red.withCol] + red.beta;
   }
   return x;
}

DualSolution
postsolveDual( const PostsolveStack& stack, const DualSolution& reduced,
               const std::vector<double>& reducedX )
{
   std::vector<double> x = postsolvePrimal( stack, reducedX );
   DualSolution out;
   out.y.assign( stack.originalRows, 0.0 );
   out.rc.assign( stack.originalCols, 0.0 );
   out.rowBasis.assign( stack.originalRows, BasisStatus::kBasic );
   out.colBasis.assign( stack.originalCols, BasisStatus::kAtLower );
   for( int j = 0; j < stack.originalCols; ++j )
      if( stack.colMap[j] >= 0 )
      {
         out.rc[j] = reduced.rc[stack.colMap[j]];
         out.colBasis[j] = reduced.colBasis[stack.colMap[j]];
      }
   for( int r = 0; r < stack.originalRows; ++r )
      if( stack.rowMap[r] >= 0 )
      {
         out.y[r] = reduced.y[stack.rowMap[r]];
         out.rowBasis[r] = reduced.rowBasis[stack.rowMap[r]];
      }
   for( auto it = stack.log.rbegin(); it != stack.log.rend(); ++it )
   {
      const Reduction& red = *it;
      switch( red.kind )
      {
      case ReductionKind::kDeleteRedundantRow:
      {
         out.y[red.row] = 0.0;
         out.rowBasis[red.row] = BasisStatus::kBasic;
         break;
      }
      case ReductionKind::kFixVar:
      {
         double rc = red.objCoef;
         for( size_t s = 0; s < red.hitRows.size(); ++s )
            rc -= out.y[red.hitRows[s]] * red.hitVals[s];
         out.rc[red.col] = rc;
         out.colBasis[red.col] =
             rc >= 0.0 ? BasisStatus::kAtLower : BasisStatus::kAtUpper;
         break;
      }
      case ReductionKind::kSubstituteVar:
      {
         double num = red.objCoef;
         for( size_t s = 0; s < red.hitRows.size(); ++s )
            num -= out.y[red.hitRows[s]] * red.hitVals[s];
         double yr = num / red.coef;
         out.y[red.row] = yr;
         out.rowBasis[red.row] =
             yr >= 0.0 ? BasisStatus::kAtLower : BasisStatus::kAtUpper;
         out.rc[red.col] = 0.0;
         out.colBasis[red.col] = BasisStatus::kBasic;
         break;
      }
      case ReductionKind::kTightenBound:
      {
         if( red.row < 0 )
            break;
         if( std::fabs( x[red.col] - red.value ) > 1e-7 )
            break;
         bool interior = red.upper ? red.value < red.oldHi - 1e-12
                                   : red.value > red.oldLo + 1e-12;
         if( !interior )
            break;
         double rc = out.rc[red.col];
         bool wrongSign = red.upper ? rc < -1e-12 : rc > 1e-12;
         if( wrongSign )
         {
            double delta = rc / red.coef;
            out.y[red.row] += delta;
            if( out.rowBasis[red.row] == BasisStatus::kBasic )
            {
               bool atUpperSide = red.upper == ( red.coef > 0.0 );
               out.rowBasis[red.row] = atUpperSide ? BasisStatus::kAtUpper
                                                   : BasisStatus::kAtLower;
            }
            for( size_t k = 0; k < red.rowCols.size(); ++k )
            {
               int i = red.rowCols[k];
               if( i == red.col )
                  continue;
               out.rc[i] -= delta * red.rowVals[k];
               if( out.colBasis[i] == BasisStatus::kBasic &&
                   std::fabs( out.rc[i] ) > 1e-12 )
                  out.colBasis[i] = out.rc[i] > 0.0 ? BasisStatus::kAtLower
                                                    : BasisStatus::kAtUpper;
            }
            out.rc[red.col] = 0.0;
            out.colBasis[red.col] = BasisStatus::kBasic;
         }
         else if( out.colBasis[red.col] ==
                  ( red.upper ? BasisStatus::kAtUpper
                              : BasisStatus::kAtLower ) )
         {
            // bound was artificial; the point is interior originally
            out.colBasis[red.col] = BasisStatus::kBasic;
         }
         break;
      }
      case ReductionKind::kScaleRow:
      {
         out.y[red.row] *= red.value;
         if( red.value < 0.0 )
         {
            if( out.rowBasis[red.row] == BasisStatus::kAtLower )
               out.rowBasis[red.row] = BasisStatus::kAtUpper;
            else if( out.rowBasis[red.row] == BasisStatus::kAtUpper )
               out.rowBasis[red.row] = BasisStatus::kAtLower;
         }
         break;
      }
      }
      if( red.kind == ReductionKind::kFixVar )
         x[red.col] = red.value;
      else if( red.kind == ReductionKind::kSubstituteVar )
         x[red.col] = red.alpha * x[red.withCol] + red.beta;
   }
   return out;
}

namespace
{

void
putU32( std::string& out, uint32_t v )
{
   for( int b = 0; b < 4; ++b )
      out.push_back( static_cast<char>( ( v >> ( 8 * b ) ) & 0xff ) );
}

void
putI32( std::string& out, int32_t v )
{
   putU32( out, static_cast<uint32_t>( v ) );
}

void
putF64( std::string& out, double v )
{
   uint64_t bits = std::bit_cast<uint64_t>( v );
   for( int b = 0; b < 8; ++b )
      out.push_back( static_cast<char>( ( bits >> ( 8 * b ) ) & 0xff ) );
}

void
putIntVec( std::string& out, const std::vector<int>& v )
{
   putU32( out, static_cast<uint32_t>( v.size() ) );
   for( int e : v )
      putI32( out, e );
}

void
putF64Vec( std::string& out, const std::vector<double>& v )
{
   putU32( out, static_cast<uint32_t>( v.size() ) );
   for( double e : v )
      putF64( out, e );
}

struct ByteReader
{
   const std::string& data;
   size_t pos = 0;

   void
   need( size_t n ) const
   {
      if( pos + n > data.size() )
         throw std::runtime_error( "postsolve stack file truncated" );
   }

   uint32_t
   getU32()
   {
      need( 4 );
      uint32_t v = 0;
      for( int b = 0; b < 4; ++b )
         v |= static_cast<uint32_t>(
                  static_cast<unsigned char>( data[pos + b] ) )
              << ( 8 * b );
      pos += 4;
      return v;
   }

   int32_t
   getI32()
   {
      return static_cast<int32_t>( getU32() );
   }

   double
   getF64()
   {
      need( 8 );
      uint64_t bits = 0;
      for( int b = 0; b < 8; ++b )
         bits |= static_cast<uint64_t>(
                     static_cast<unsigned char>( data[pos + b] ) )
                 << ( 8 * b );
      pos += 8;
      return std::bit_cast<double>( bits );
   }

   std::vector<int>
   getIntVec()
   {
      uint32_t n = getU32();
      std::vector<int> v( n );
      for( uint32_t i = 0; i < n; ++i )
         v[i] = getI32();
      return v;
   }

   std::vector<double>
   getF64Vec()
   {
      uint32_t n = getU32();
      std::vector<double> v( n );
      for( uint32_t i = 0; i < n; ++i )
         v[i] = getF64();
      return v;
   }
};

constexpr char kStackMagic[4] = { 'M', 'C', 'P', 'S' };
constexpr uint32_t kStackVersion = 1;

} // namespace

void
writePostsolveStack( const std::string& path, const PostsolveStack& stack )
{
   std::string out;
   out.append( kStackMagic, 4 );
   putU32( out, kStackVersion );
   putI32( out, stack.originalCols );
   putI32( out, stack.originalRows );
   putIntVec( out, stack.colMap );
   putIntVec( out, stack.rowMap );
   putU32( out, static_cast<uint32_t>( stack.log.size() ) );
   for( const Reduction& red : stack.log )
   {
      out.push_back( static_cast<char>( red.kind ) );
      putI32( out, red.col );
      putI32( out, red.row );
      putI32( out, red.withCol );
      out.push_back( red.upper ? 1 : 0 );
      putF64( out, red.value );
      putF64( out, red.oldLo );
      putF64( out, red.oldHi );
      putF64( out, red.alpha );
      putF64( out, red.beta );
      putF64( out, red.objCoef );
      putF64( out, red.coef );
      putF64( out, red.rowLhs );
      putF64( out, red.rowRhs );
      putIntVec( out, red.rowCols );
      putF64Vec( out, red.rowVals );
      putIntVec( out, red.hitRows );
      putF64Vec( out, red.hitVals );
      putIntVec( out, red.touchedRows );
      putIntVec( out, red.touchedCols );
   }
   std::ofstream file( path, std::ios::binary );
   if( !file )
      throw std::runtime_error( "cannot open " + path + " for writing" );
   file.write( out.data(), static_cast<std::streamsize>( out.size() ) );
}

PostsolveStack
readPostsolveStack( const std::string& path )
{
   std::ifstream file( path, std::ios::binary );
   if( !file )
      throw std::runtime_error( "cannot open " + path );
   std::string data( ( std::istreambuf_iterator<char>( file ) ),
                     std::istreambuf_iterator<char>() );
   ByteReader in{ data };
   in.need( 4 );
   if( data.compare( 0, 4, kStackMagic, 4 ) != 0 )
      throw std::runtime_error( "not a postsolve stack file: " + path );
   in.pos = 4;
   uint32_t version = in.getU32();
   if( version != kStackVersion )
      throw std::runtime_error( "unsupported postsolve stack version" );
   PostsolveStack stack;
   stack.originalCols = in.getI32();
   stack.originalRows = in.getI32();
   stack.colMap = in.getIntVec();
   stack.rowMap = in.getIntVec();
   uint32_t count = in.getU32();
   stack.log.resize( count );
   for( uint32_t i = 0; i < count; ++i )
   {
      Reduction& red = stack.log[i];
      in.need( 1 );
      red.kind = static_cast<ReductionKind>(
          static_cast<unsigned char>( data[in.pos++] ) );
      red.col = in.getI32();
      red.row = in.getI32();
      red.withCol = in.getI32();
      in.need( 1 );
      red.upper = data[in.pos++] != 0;
      red.value = in.getF64();
      red.oldLo = in.getF64();
      red.oldHi = in.getF64();
      red.alpha = in.getF64();
      red.beta = in.getF64();
      red.objCoef = in.getF64();
      red.coef = in.getF64();
      red.rowLhs = in.getF64();
      red.rowRhs = in.getF64();
      red.rowCols = in.getIntVec();
      red.rowVals = in.getF64Vec();
      red.hitRows = in.getIntVec();
      red.hitVals = in.getF64Vec();
      red.touchedRows = in.getIntVec();
      red.touchedCols = in.getIntVec();
   }
   return stack;
}

} // namespace minicip
