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

#include "minicip/symmetry.hpp"

#include "minicip/instance.hpp"
#include "minicip/sbb.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace minicip
{

thread_local long symmetryOpCounter = 0;

bool
Permutation::isValid() const
{
   int n = size();
   std::vector<bool> seen( n, false );
   for( int j = 0; j < n; ++j )
   {
      if( image[j] < 0 || image[j] >= n || seen[image[j]] )
         return false;
      seen[image[j]] = true;
   }
   return true;
}

Permutation
Permutation::inverse() const
{
   Permutation inv;
   inv.image.resize( image.size() );
   for( int j = 0; j < size(); ++j )
      inv.image[image[j]] = j;
   return inv;
}

Permutation
Permutation::compose( const Permutation& other ) const
{
   assert( size() == other.size() );
   Permutation out;
   out.image.resize( image.size() );
   for( int j = 0; j < size(); ++j )
      out.image[j] = image[other.image[j]];
   return out;
}

namespace
{

struct UnionFind
{
   std::vector<int> parent;

   explicit UnionFind( int n ) : parent( n )
   {
      std::iota( parent.begin(), parent.end(), 0 );
   }

   int
   find( int j )
   {
      while( parent[j] != j )
      {
         parent[j] = parent[parent[j]];
         j = parent[j];
      }
      return j;
   }

   void
   unite( int a, int b )
   {
      a = find( a );
      b = find( b );
      if( a != b )
         parent[std::max( a, b )] = std::min( a, b );
   }
};

std::vector<int>
supportOf( const Permutation& perm )
{
   std::vector<int> s;
   for( int j = 0; j < perm.size(); ++j )
      if( perm.image[j] != j )
         s.push_back( j );
   return s;
}

/// groups indices by union-find root, ordered by smallest member
std::vector<std::vector<int>>
collectGroups( UnionFind& uf, int n )
{
   std::map<int, std::vector<int>> byRoot;
   for( int j = 0; j < n; ++j )
      byRoot[uf.find( j )].push_back( j );
   std::vector<std::vector<int>> groups;
   groups.reserve( byRoot.size() );
   for( auto& entry : byRoot )
      groups.push_back( std::move( entry.second ) );
   return groups;
}

} // namespace

std::vector<std::vector<int>>
computeOrbits( const std::vector<Permutation>& generators, int n )
{
   UnionFind uf( n );
   for( const Permutation& perm : generators )
      for( int j = 0; j < perm.size(); ++j )
         uf.unite( j, perm.image[j] );
   return collectGroups( uf, n );
}

std::vector<SymComponent>
computeComponents( const std::vector<Permutation>& generators, int n )
{
   UnionFind uf( n );
   std::vector<std::vector<int>> supports;
   supports.reserve( generators.size() );
   for( const Permutation& perm : generators )
   {
      supports.push_back( supportOf( perm ) );
      const std::vector<int>& s = supports.back();
      for( size_t k = 1; k < s.size(); ++k )
         uf.unite( s[0], s[k] );
   }

   // one component per root, ordered by the smallest affected index
   std::map<int, SymComponent> byRoot;
   for( size_t g = 0; g < generators.size(); ++g )
   {
      if( supports[g].empty() )
         continue; // identity contributes nothing
      SymComponent& comp = byRoot[uf.find( supports[g][0] )];
      comp.generators.push_back( generators[g] );
      comp.affected.insert( comp.affected.end(), supports[g].begin(),
                            supports[g].end() );
   }

   std::vector<SymComponent> components;
   components.reserve( byRoot.size() );
   for( auto& entry : byRoot )
   {
      std::vector<int>& aff = entry.second.affected;
      std::sort( aff.begin(), aff.end() );
      aff.erase( std::unique( aff.begin(), aff.end() ), aff.end() );
      components.push_back( std::move( entry.second ) );
   }
   return components;
}

namespace
{

/** Schreier generators of the stabilizer of point within the group spanned
 *  by gens. The transversal element u[beta] maps point to beta; every
 *  u[gamma(beta)]^-1 gamma u[beta] fixes point, and together they generate
 *  the full point stabilizer. Identities are dropped and duplicates merged
 *  so the set stays deterministic.
 */
std::vector<Permutation>
stabilizerGenerators( const std::vector<Permutation>& gens, int point, int n )
{
   Permutation identity;
   identity.image.resize( n );
   std::iota( identity.image.begin(), identity.image.end(), 0 );

   std::map<int, Permutation> transversal;
   transversal[point] = identity;
   std::vector<int> frontier = { point };
   while( !frontier.empty() )
   {
      std::vector<int> next;
      for( int beta : frontier )
         for( const Permutation& gamma : gens )
         {
            int target = gamma.image[beta];
            if( transversal.count( target ) == 0 )
            {
               transversal[target] = gamma.compose( transversal[beta] );
               next.push_back( target );
            }
         }
      frontier = std::move( next );
   }

   std::set<std::vector<int>> images;
   for( const auto& entry : transversal )
      for( const Permutation& gamma : gens )
      {
         int beta = entry.first;
         Permutation s = transversal[gamma.image[beta]].inverse().compose(
             gamma.compose( entry.second ) );
         assert( s.image[point] == point );
         if( !s.isIdentity() )
            images.insert( std::move( s.image ) );
      }

   std::vector<Permutation> out;
   out.reserve( images.size() );
   for( const std::vector<int>& img : images )
      out.push_back( Permutation{ img } );
   return out;
}

} // namespace

SstCutSet
buildSstCuts( const SymComponent& component, int n, LeaderRule rule )
{
   SstCutSet out;
   std::vector<Permutation> gens;
   for( const Permutation& perm : component.generators )
      if( !perm.isIdentity() )
         gens.push_back( perm );

   while( !gens.empty() )
   {
      std::vector<std::vector<int>> orbits;
      for( std::vector<int>& orbit : computeOrbits( gens, n ) )
         if( orbit.size() >= 2 )
            orbits.push_back( std::move( orbit ) );
      if( orbits.empty() )
         break;

      // orbits arrive ordered by smallest member, so the first one holds
      // the overall smallest moved index
      size_t pick = 0;
      if( rule == LeaderRule::kMaxOrbit )
         for( size_t k = 1; k < orbits.size(); ++k )
            if( orbits[k].size() > orbits[pick].size() )
               pick = k;
      int leader = orbits[pick][0];

      out.leaders.push_back( leader );
      out.orbits.push_back( orbits[pick] );
      for( int member : orbits[pick] )
         if( member != leader )
            out.cuts.push_back( SstCut{ leader, member } );

      gens = stabilizerGenerators( gens, leader, n );
   }
   return out;
}

SstCutSet
buildSstCuts( const Instance& instance, const SymComponent& component,
              LeaderRule rule )
{
   int n = instance.numVars();
   for( int j : component.affected )
   {
      if( j < 0 || j >= n )
         throw std::invalid_argument( "symmetry component references an "
                                      "unknown variable index" );
      const Variable& ref = instance.vars[component.affected[0]];
      const Variable& var = instance.vars[j];
      if( var.lo != ref.lo || var.hi != ref.hi ||
          var.integral != ref.integral )
         throw std::invalid_argument(
             "SST cuts need a common domain, but variables '" + ref.name +
             "' and '" + var.name + "' differ" );
   }
   return buildSstCuts( component, n, rule );
}

namespace
{

/** Whether some completion of bounds satisfies x >=lex permuted x, assuming
 *  every completion agrees with its image strictly before position start.
 *  Positions whose pair is undecided but offers the strict choice
 *  (x_i, x_{inv(i)}) = (1, 0) always admit a completion; otherwise the
 *  walk's assignment is forced and recorded in bounds.
 */
bool
suffixFeasible( const Permutation& inv, std::vector<BinaryBound> bounds,
                int start )
{
   int n = inv.size();
   for( int i = start; i < n; ++i )
   {
      int yvar = inv.image[i];
      if( yvar == i )
         continue;
      BinaryBound dx = bounds[i];
      BinaryBound dy = bounds[yvar];
      if( dx == BinaryBound::kZero && dy == BinaryBound::kOne )
         return false;
      if( dx == dy && dx != BinaryBound::kFree )
         continue;
      if( dx == BinaryBound::kFree && dy == BinaryBound::kOne )
      {
         bounds[i] = BinaryBound::kOne;
         continue;
      }
      if( dx == BinaryBound::kZero && dy == BinaryBound::kFree )
      {
         bounds[yvar] = BinaryBound::kZero;
         continue;
      }
      // the pair can take (1, 0), deciding the order strictly
      return true;
   }
   return true; // equality completion
}

} // namespace

LexFixings
propagateLex( const Permutation& perm, const std::vector<BinaryBound>& bounds )
{
   assert( static_cast<int>( bounds.size() ) == perm.size() );
   LexFixings out;
   Permutation inv = perm.inverse();
   std::vector<BinaryBound> vb = bounds;
   int n = perm.size();

   auto fix = [&]( int var, BinaryBound value ) {
      vb[var] = value;
      out.fixings.emplace_back( var, value );
   };

   /* Walk positions while every feasible completion is known to agree with
    * its image on the processed prefix. At the first undecided pair only
    * the lookahead cases below can still force a value; afterwards a
    * strict completion leaves the remaining variables free, so no further
    * single-variable deduction exists and the walk stops.
    */
   for( int i = 0; i < n; ++i )
   {
      int yvar = inv.image[i];
      if( yvar == i )
         continue;
      BinaryBound dx = vb[i];
      BinaryBound dy = vb[yvar];

      if( dx == BinaryBound::kOne && dy == BinaryBound::kZero )
         return out; // strictly larger, rest unconstrained
      if( dx == BinaryBound::kZero && dy == BinaryBound::kOne )
      {
         out.infeasible = true;
         out.fixings.clear();
         return out;
      }
      if( dx == dy && dx != BinaryBound::kFree )
         continue;

      if( dx == BinaryBound::kFree && dy == BinaryBound::kOne )
      {
         fix( i, BinaryBound::kOne );
         continue;
      }
      if( dx == BinaryBound::kZero && dy == BinaryBound::kFree )
      {
         fix( yvar, BinaryBound::kZero );
         continue;
      }

      if( dx == BinaryBound::kOne && dy == BinaryBound::kFree )
      {
         // either x_{yvar} = 0 settles the order, or the pair stays equal
         // and the suffix must admit a completion
         std::vector<BinaryBound> eq = vb;
         eq[yvar] = BinaryBound::kOne;
         if( !suffixFeasible( inv, std::move( eq ), i + 1 ) )
            fix( yvar, BinaryBound::kZero );
         return out;
      }
      if( dx == BinaryBound::kFree && dy == BinaryBound::kZero )
      {
         std::vector<BinaryBound> eq = vb;
         eq[i] = BinaryBound::kZero;
         if( !suffixFeasible( inv, std::move( eq ), i + 1 ) )
            fix( i, BinaryBound::kOne );
         return out;
      }

      // both free: the strict completion (1, 0) always exists, so a value
      // is forced only when the matching equal branch dies later on
      std::vector<BinaryBound> eq00 = vb;
      eq00[i] = BinaryBound::kZero;
      eq00[yvar] = BinaryBound::kZero;
      std::vector<BinaryBound> eq11 = vb;
      eq11[i] = BinaryBound::kOne;
      eq11[yvar] = BinaryBound::kOne;
      if( !suffixFeasible( inv, std::move( eq00 ), i + 1 ) )
         fix( i, BinaryBound::kOne );
      if( !suffixFeasible( inv, std::move( eq11 ), i + 1 ) )
         fix( yvar, BinaryBound::kZero );
      return out;
   }
   return out; // x equals its image on every position
}

std::optional<CoverCut>
separateCover( const Permutation& perm, const std::vector<double>& xstar,
               double minViolation )
{
   int n = perm.size();
   assert( static_cast<int>( xstar.size() ) == n );
   Permutation inv = perm.inverse();
   std::vector<int> support = supportOf( perm );
   if( support.empty() )
      return std::nullopt;

   /* Inequalities x_{inv(i)} - x_i <= sum_{k < i moved} min(x_k,
    * 1 - x_{inv(k)}) hold on the fundamental domain: a zero right-hand
    * side forces the prefix to agree with its image, and the order then
    * demands x_i >= x_{inv(i)}. One sweep along the moved indices finds
    * the head position maximizing the violation at xstar.
    */
   double running = 0.0;
   int best = -1;
   double bestViol = minViolation;
   for( int idx : support )
   {
      ++symmetryOpCounter;
      double viol = xstar[inv.image[idx]] - xstar[idx] - running;
      if( viol > bestViol )
      {
         bestViol = viol;
         best = idx;
      }
      running += std::min( xstar[idx], 1.0 - xstar[inv.image[idx]] );
   }
   if( best < 0 )
      return std::nullopt;

   // linearize each min term at its smaller side and merge coefficients
   std::vector<double> dense( n, 0.0 );
   double rhs = 0.0;
   dense[inv.image[best]] += 1.0;
   dense[best] -= 1.0;
   for( int idx : support )
   {
      if( idx >= best )
         break;
      ++symmetryOpCounter;
      if( xstar[idx] <= 1.0 - xstar[inv.image[idx]] )
         dense[idx] -= 1.0;
      else
      {
         dense[inv.image[idx]] += 1.0;
         rhs += 1.0;
      }
   }

   CoverCut cut;
   cut.rhs = rhs;
   double activity = 0.0;
   for( int j = 0; j < n; ++j )
      if( dense[j] != 0.0 )
      {
         cut.support.push_back( j );
         cut.coeffs.push_back( dense[j] );
         activity += dense[j] * xstar[j];
      }
   cut.violation = activity - rhs;
   return cut;
}

void
attachSymmetryHandling( Instance& instance,
                        const std::vector<Permutation>& generators,
                        PluginRegistry& registry, LeaderRule rule )
{
   int n = instance.numVars();
   for( const Permutation& perm : generators )
      if( perm.size() != n || !perm.isValid() )
         throw std::invalid_argument(
             "symmetry generator does not permute the variable index set" );

   int cutId = 0;
   for( const SymComponent& comp : computeComponents( generators, n ) )
   {
      SstCutSet sst = buildSstCuts( instance, comp, rule );
      for( const SstCut& cut : sst.cuts )
      {
         LinearRow row;
         row.name = "sym_sst_" + std::to_string( cutId++ );
         row.cols = { cut.leader, cut.follower };
         row.vals = { 1.0, -1.0 };
         row.lhs = 0.0;
         row.rhs = infinity;
         instance.linRows.push_back( std::move( row ) );
      }

      bool allBinary = true;
      for( int j : comp.affected )
         allBinary = allBinary && instance.vars[j].isBinary();
      if( !allBinary || rule != LeaderRule::kMinIndex )
         continue;

      for( const Permutation& gamma : comp.generators )
      {
         registry.propagators.push_back(
             [gamma]( const Instance&, const ExtendedForm&,
                      std::vector<Interval>& box ) -> bool {
                int m = gamma.size();
                std::vector<BinaryBound> bounds( m, BinaryBound::kFree );
                for( int j = 0; j < m; ++j )
                {
                   if( box[j].isEmpty() )
                      return false;
                   if( box[j].hi < 0.5 )
                      bounds[j] = BinaryBound::kZero;
                   else if( box[j].lo > 0.5 )
                      bounds[j] = BinaryBound::kOne;
                }
                LexFixings fixed = propagateLex( gamma, bounds );
                if( fixed.infeasible )
                   return false;
                for( const auto& [var, value] : fixed.fixings )
                {
                   double v = value == BinaryBound::kOne ? 1.0 : 0.0;
                   box[var] = intersect( box[var], Interval{ v, v } );
                   if( box[var].isEmpty() )
                      return false;
                }
                return true;
             } );

         registry.separators.push_back(
             [gamma]( const Instance&, const ExtendedForm&,
                      const std::vector<Interval>&,
                      const std::vector<double>& lpPoint ) {
                int m = gamma.size();
                std::vector<double> xstar( m );
                for( int j = 0; j < m; ++j )
                   xstar[j] = std::clamp( lpPoint[j], 0.0, 1.0 );
                std::vector<Cut> cuts;
                if( std::optional<CoverCut> cover =
                        separateCover( gamma, xstar ) )
                {
                   Cut cut;
                   cut.cols = cover->support;
                   cut.vals = cover->coeffs;
                   cut.rhs = cover->rhs;
                   double norm = 0.0;
                   for( double v : cut.vals )
                      norm += v * v;
                   cut.efficacy = cover->violation / std::sqrt( norm );
                   cuts.push_back( std::move( cut ) );
                }
                return cuts;
             } );
      }
   }
}

} // namespace minicip
