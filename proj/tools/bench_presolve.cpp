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

/* Timing comparison of the serial presolve loop against the OpenMP worker
 * dispatch on synthetic instances, checking that both produce identical
 * reduced problems. Build and run by hand; this tool is not part of the
 * test suite.
 */

#include "minicip/io.hpp"
#include "minicip/presolve.hpp"

#include <chrono>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

using namespace minicip;

namespace
{

Instance
syntheticInstance( std::mt19937& rng, int n, int m )
{
   Instance inst;
   inst.name = "bench";
   std::uniform_int_distribution<int> hiDie( 1, 9 );
   std::uniform_int_distribution<int> objDie( -5, 5 );
   std::uniform_int_distribution<int> coefDie( -4, 4 );
   std::uniform_real_distribution<double> pointDie( 0.0, 1.0 );
   std::uniform_real_distribution<double> slackDie( 0.0, 4.0 );
   std::uniform_int_distribution<int> typeDie( 0, 9 );
   std::vector<double> xhat( n );
   for( int j = 0; j < n; ++j )
   {
      double hi = hiDie( rng );
      Variable v;
      v.name = "x" + std::to_string( j );
      v.lo = 0.0;
      v.hi = hi;
      inst.vars.push_back( v );
      inst.obj.push_back( objDie( rng ) );
      xhat[j] = pointDie( rng ) * hi;
   }
   for( int r = 0; r < m; ++r )
   {
      LinearRow row;
      row.name = "r" + std::to_string( r );
      int len = 2 + static_cast<int>( rng() % 5 );
      double act = 0.0;
      for( int k = 0; k < len; ++k )
      {
         int col = static_cast<int>( rng() % n );
         int a = coefDie( rng );
         if( a == 0 )
            a = 1;
         row.cols.push_back( col );
         row.vals.push_back( a );
         act += a * xhat[col];
      }
      int type = typeDie( rng );
      if( type < 2 )
      {
         row.lhs = act;
         row.rhs = act;
      }
      else if( type < 6 )
      {
         row.lhs = -infinity;
         row.rhs = act + slackDie( rng );
      }
      else
      {
         row.lhs = act - slackDie( rng );
         row.rhs = infinity;
      }
      inst.linRows.push_back( row );
   }
   return inst;
}

double
timedRun( const std::vector<Instance>& pool, bool parallel, long& applied )
{
   PresolveParams params;
   params.parallel = parallel;
   applied = 0;
   auto start = std::chrono::steady_clock::now();
   for( const Instance& inst : pool )
   {
      PresolveResult res = runPresolve( inst, params );
      applied += res.stats.applied;
   }
   auto stop = std::chrono::steady_clock::now();
   return std::chrono::duration<double>( stop - start ).count();
}

} // namespace

int
main( int argc, char** argv )
{
   int instances = argc > 1 ? std::atoi( argv[1] ) : 40;
   int n = argc > 2 ? std::atoi( argv[2] ) : 400;
   int m = argc > 3 ? std::atoi( argv[3] ) : 300;
   std::mt19937 rng( 1 );
   std::vector<Instance> pool;
   pool.reserve( static_cast<size_t>( instances ) );
   for( int i = 0; i < instances; ++i )
      pool.push_back( syntheticInstance( rng, n, m ) );

   long serialApplied = 0;
   long parallelApplied = 0;
   double serialTime = timedRun( pool, false, serialApplied );
   double parallelTime = timedRun( pool, true, parallelApplied );

   bool identical = true;
   for( const Instance& inst : pool )
   {
      PresolveParams serialParams;
      PresolveParams parallelParams;
      parallelParams.parallel = true;
      Instance a = runPresolve( inst, serialParams ).reduced;
      Instance b = runPresolve( inst, parallelParams ).reduced;
      if( writeInstanceText( a ) != writeInstanceText( b ) )
      {
         identical = false;
         break;
      }
   }

   std::printf( "instances        %d  (%d cols, %d rows each)\n", instances,
                n, m );
   std::printf( "serial           %.3f s  (%ld reductions)\n", serialTime,
                serialApplied );
   std::printf( "openmp workers   %.3f s  (%ld reductions)\n", parallelTime,
                parallelApplied );
   std::printf( "speedup          %.2fx\n",
                parallelTime > 0.0 ? serialTime / parallelTime : 0.0 );
   std::printf( "outputs          %s\n",
                identical ? "identical" : "DIFFER" );
   return identical && serialApplied == parallelApplied ? 0 : 1;
}
