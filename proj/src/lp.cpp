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

#include "minicip/lp.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace minicip
{

namespace
{

constexpr double feasTol = 1e-9;
constexpr double dualTol = 1e-9;
constexpr double pivTol = 1e-9;

/** Bounded-variable primal simplex on the slack form [A | -I] z = 0.
 *
 *  Columns 0..n-1 are structural, n..n+m-1 are row slacks with the row
 *  sides as bounds. The basis inverse is recomputed from scratch before
 *  every pricing step; at desk scale this is cheap and keeps roundoff from
 *  accumulating across pivots.
 */
class Simplex
{
 public:
   explicit Simplex( const LpProblem& problem )
       : n_( problem.numCols() ), m_( problem.numRows() ), ntot_( n_ + m_ )
   {
      cols_.assign( ntot_, std::vector<double>( m_, 0.0 ) );
      lo_.resize( ntot_ );
      hi_.resize( ntot_ );
      cost_.assign( ntot_, 0.0 );
      for( int j = 0; j < n_; ++j )
      {
         lo_[j] = problem.lo[j];
         hi_[j] = problem.hi[j];
         cost_[j] = problem.c[j];
      }
      for( int i = 0; i < m_; ++i )
      {
         const LpRow& row = problem.rows[i];
         for( size_t k = 0; k < row.cols.size(); ++k )
            cols_[row.cols[k]][i] += row.vals[k];
         cols_[n_ + i][i] = -1.0;
         lo_[n_ + i] = row.lhs;
         hi_[n_ + i] = row.rhs;
      }

      state_.assign( ntot_, kLower );
      basicPos_.assign( ntot_, -1 );
      basicVar_.resize( m_ );
      for( int i = 0; i < m_; ++i )
      {
         basicVar_[i] = n_ + i;
         state_[n_ + i] = kBasic;
         basicPos_[n_ + i] = i;
      }
      for( int j = 0; j < n_; ++j )
      {
         if( lo_[j] > -infinity )
            state_[j] = kLower;
         else if( hi_[j] < infinity )
            state_[j] = kUpper;
         else
            state_[j] = kFree;
      }
   }

   LpSolution
   run( int iterationLimit )
   {
      LpSolution sol;
      int degenerate = 0;
      const int blandTrigger = 3 * ( m_ + n_ );

      for( sol.iterations = 0;; ++sol.iterations )
      {
         if( sol.iterations >= iterationLimit )
         {
            sol.status = LpStatus::kIterationLimit;
            return sol;
         }

         factorize();
         computeBasicValues();

         bool phase1 = false;
         std::vector<double> cb( m_ );
         for( int i = 0; i < m_; ++i )
         {
            int j = basicVar_[i];
            if( xb_[i] < lo_[j] - feasTol )
            {
               cb[i] = -1.0;
               phase1 = true;
            }
            else if( xb_[i] > hi_[j] + feasTol )
            {
               cb[i] = 1.0;
               phase1 = true;
            }
         }
         if( !phase1 )
            for( int i = 0; i < m_; ++i )
               cb[i] = cost_[basicVar_[i]];

         // y' = cb' * Binv
         std::vector<double> y( m_, 0.0 );
         for( int i = 0; i < m_; ++i )
            if( cb[i] != 0.0 )
               for( int k = 0; k < m_; ++k )
                  y[k] += cb[i] * binv_[i][k];

         bool bland = degenerate >= blandTrigger;
         int enter = -1;
         int dir = 0;
         double best = 0.0;
         for( int j = 0; j < ntot_; ++j )
         {
            if( state_[j] == kBasic )
               continue;
            double cj = phase1 ? 0.0 : cost_[j];
            double rc = cj;
            for( int i = 0; i < m_; ++i )
               rc -= y[i] * cols_[j][i];
            int d = 0;
            if( ( state_[j] == kLower || state_[j] == kFree ) &&
                rc < -dualTol )
               d = 1;
            else if( ( state_[j] == kUpper || state_[j] == kFree ) &&
                     rc > dualTol )
               d = -1;
            if( d == 0 )
               continue;
            if( bland )
            {
               enter = j;
               dir = d;
               break;
            }
            if( std::fabs( rc ) > best )
            {
               best = std::fabs( rc );
               enter = j;
               dir = d;
            }
         }

         if( enter < 0 )
         {
            if( phase1 )
            {
               sol.status = LpStatus::kInfeasible;
               return sol;
            }
            return assemble( y, sol.iterations );
         }

         // direction of basic values: xb += -dir * d * t
         std::vector<double> d( m_, 0.0 );
         for( int i = 0; i < m_; ++i )
         {
            double v = 0.0;
            for( int k = 0; k < m_; ++k )
               v += binv_[i][k] * cols_[enter][k];
            d[i] = v;
         }

         double tBound = infinity;
         if( lo_[enter] > -infinity && hi_[enter] < infinity )
            tBound = hi_[enter] - lo_[enter];

         double tMin = tBound;
         int leave = -1;
         for( int i = 0; i < m_; ++i )
         {
            double delta = -dir * d[i];
            if( std::fabs( delta ) < pivTol )
               continue;
            int j = basicVar_[i];
            bool below = xb_[i] < lo_[j] - feasTol;
            bool above = xb_[i] > hi_[j] + feasTol;
            double limit = infinity;
            if( delta > 0.0 )
            {
               // moving up: feasible vars block at hi, below-bound vars at lo
               double bnd = below ? lo_[j] : above ? infinity : hi_[j];
               if( bnd < infinity )
                  limit = std::max( 0.0, ( bnd - xb_[i] ) / delta );
            }
            else
            {
               double bnd = above ? hi_[j] : below ? -infinity : lo_[j];
               if( bnd > -infinity )
                  limit = std::max( 0.0, ( bnd - xb_[i] ) / delta );
            }
            if( limit >= infinity )
               continue;
            if( limit < tMin - 1e-12 )
            {
               tMin = limit;
               leave = i;
            }
            else if( leave >= 0 && limit < tMin + 1e-12 )
            {
               // tie: prefer large pivots, then small index for determinism
               if( bland ? basicVar_[i] < basicVar_[leave]
                         : std::fabs( d[i] ) >
                               std::fabs( d[leave] ) + 1e-12 )
               {
                  tMin = std::min( tMin, limit );
                  leave = i;
               }
            }
         }

         if( tMin >= infinity )
         {
            if( phase1 )
               throw std::logic_error( "phase 1 ray" );
            sol.status = LpStatus::kUnbounded;
            return sol;
         }

         if( tMin < 1e-12 )
            ++degenerate;
         else
            degenerate = 0;

         if( leave < 0 )
         {
            // entering column hits its own opposite bound
            state_[enter] = state_[enter] == kLower ? kUpper : kLower;
            continue;
         }

         int out = basicVar_[leave];
         double delta = -dir * d[leave];
         state_[out] = delta > 0.0 ? kUpper : kLower;
         // a below-bound variable driven up leaves at its lower bound
         if( xb_[leave] < lo_[out] - feasTol && delta > 0.0 )
            state_[out] = kLower;
         if( xb_[leave] > hi_[out] + feasTol && delta < 0.0 )
            state_[out] = kUpper;
         basicPos_[out] = -1;
         basicVar_[leave] = enter;
         basicPos_[enter] = leave;
         state_[enter] = kBasic;
      }
   }

 private:
   enum State : char
   {
      kBasic,
      kLower,
      kUpper,
      kFree
   };

   double
   nonbasicValue( int j ) const
   {
      switch( state_[j] )
      {
      case kLower:
         return lo_[j];
      case kUpper:
         return hi_[j];
      default:
         return 0.0;
      }
   }

   void
   factorize()
   {
      // Gauss-Jordan inverse of the basis matrix with partial pivoting
      std::vector<std::vector<double>> a( m_, std::vector<double>( m_ ) );
      binv_.assign( m_, std::vector<double>( m_, 0.0 ) );
      for( int i = 0; i < m_; ++i )
      {
         for( int k = 0; k < m_; ++k )
            a[i][k] = cols_[basicVar_[k]][i];
         binv_[i][i] = 1.0;
      }
      for( int col = 0; col < m_; ++col )
      {
         int piv = col;
         for( int i = col + 1; i < m_; ++i )
            if( std::fabs( a[i][col] ) > std::fabs( a[piv][col] ) )
               piv = i;
         if( std::fabs( a[piv][col] ) < 1e-12 )
            throw std::logic_error( "singular basis" );
         std::swap( a[piv], a[col] );
         std::swap( binv_[piv], binv_[col] );
         double s = 1.0 / a[col][col];
         for( int k = 0; k < m_; ++k )
         {
            a[col][k] *= s;
            binv_[col][k] *= s;
         }
         for( int i = 0; i < m_; ++i )
         {
            if( i == col || a[i][col] == 0.0 )
               continue;
            double f = a[i][col];
            for( int k = 0; k < m_; ++k )
            {
               a[i][k] -= f * a[col][k];
               binv_[i][k] -= f * binv_[col][k];
            }
         }
      }
   }

   void
   computeBasicValues()
   {
      std::vector<double> r( m_, 0.0 );
      for( int j = 0; j < ntot_; ++j )
      {
         if( state_[j] == kBasic )
            continue;
         double v = nonbasicValue( j );
         if( v == 0.0 )
            continue;
         for( int i = 0; i < m_; ++i )
            r[i] += cols_[j][i] * v;
      }
      xb_.assign( m_, 0.0 );
      for( int i = 0; i < m_; ++i )
      {
         double v = 0.0;
         for( int k = 0; k < m_; ++k )
            v -= binv_[i][k] * r[k];
         xb_[i] = v;
      }
   }

   LpSolution
   assemble( const std::vector<double>& y, int iterations )
   {
      LpSolution sol;
      sol.status = LpStatus::kOptimal;
      sol.iterations = iterations;
      sol.x.resize( n_ );
      sol.y.assign( m_, 0.0 );
      sol.rc.assign( n_, 0.0 );
      sol.colBasis.resize( n_ );
      sol.rowBasis.resize( m_ );

      std::vector<double> z( ntot_ );
      for( int j = 0; j < ntot_; ++j )
         z[j] = state_[j] == kBasic ? xb_[basicPos_[j]] : nonbasicValue( j );
      for( int j = 0; j < n_; ++j )
         sol.x[j] = z[j];

      for( int i = 0; i < m_; ++i )
         sol.y[i] = y[i];
      sol.obj = 0.0;
      for( int j = 0; j < n_; ++j )
      {
         double rc = cost_[j];
         for( int i = 0; i < m_; ++i )
            rc -= y[i] * cols_[j][i];
         sol.rc[j] = rc;
         sol.obj += cost_[j] * z[j];
      }

      auto pub = [&]( int j ) {
         if( state_[j] == kBasic )
            return BasisStatus::kBasic;
         if( state_[j] == kUpper )
            return BasisStatus::kAtUpper;
         return BasisStatus::kAtLower;
      };
      for( int j = 0; j < n_; ++j )
         sol.colBasis[j] = pub( j );
      for( int i = 0; i < m_; ++i )
         sol.rowBasis[i] = pub( n_ + i );
      return sol;
   }

   int n_;
   int m_;
   int ntot_;
   std::vector<std::vector<double>> cols_;
   std::vector<double> lo_, hi_, cost_;
   std::vector<State> state_;
   std::vector<int> basicVar_;
   std::vector<int> basicPos_;
   std::vector<std::vector<double>> binv_;
   std::vector<double> xb_;
};

} // namespace

LpSolution
solveLp( const LpProblem& problem, int iterationLimit )
{
   assert( problem.lo.size() == problem.c.size() );
   assert( problem.hi.size() == problem.c.size() );
   return Simplex( problem ).run( iterationLimit );
}

LpProblem
linearRelaxation( const Instance& inst )
{
   LpProblem lp;
   lp.c = inst.obj;
   lp.lo.reserve( inst.vars.size() );
   lp.hi.reserve( inst.vars.size() );
   for( const Variable& v : inst.vars )
   {
      lp.lo.push_back( v.lo );
      lp.hi.push_back( v.hi );
   }
   for( const LinearRow& row : inst.linRows )
   {
      LpRow r;
      r.cols = row.cols;
      r.vals = row.vals;
      r.lhs = row.lhs;
      r.rhs = row.rhs;
      lp.rows.push_back( r );
   }
   return lp;
}

} // namespace minicip
