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

#ifndef MINICIP_SYMMETRY_HPP
#define MINICIP_SYMMETRY_HPP

#include <cstdint>
#include <optional>
#include <vector>

namespace minicip
{
struct Instance;
struct PluginRegistry;
}

namespace minicip
{

/// permutation of variable indices 0..n-1; image[j] is where j is mapped
struct Permutation
{
   std::vector<int> image;

   int
   size() const
   {
      return static_cast<int>( image.size() );
   }

   bool
   isIdentity() const
   {
      for( int j = 0; j < size(); ++j )
         if( image[j] != j )
            return false;
      return true;
   }

   bool isValid() const;

   Permutation inverse() const;

   /// composition: (this after other)(j) = this(other(j))
   Permutation compose( const Permutation& other ) const;
};

/// generators whose supports are connected; components partition the supports
struct SymComponent
{
   std::vector<Permutation> generators;
   std::vector<int> affected;
};

struct SstCut
{
   int leader;
   int follower; // inequality x[leader] >= x[follower]
};

struct SstCutSet
{
   std::vector<int> leaders;
   std::vector<std::vector<int>> orbits; // orbit used for each leader
   std::vector<SstCut> cuts;
};

/** Leader selection inside the stabilizer chain. kMinIndex takes the
 *  smallest index on a nontrivial orbit; kMaxOrbit takes the largest
 *  nontrivial orbit (ties to the one with the smallest member) and uses
 *  its smallest member as leader. */
enum class LeaderRule
{
   kMinIndex,
   kMaxOrbit
};

/// union-find orbit partition of {0..n-1} under the generator group
std::vector<std::vector<int>>
computeOrbits( const std::vector<Permutation>& generators, int n );

/// splits generators into components with pairwise disjoint supports
std::vector<SymComponent>
computeComponents( const std::vector<Permutation>& generators, int n );

SstCutSet
buildSstCuts( const SymComponent& component, int n, LeaderRule rule );

/** Domain-checked variant: the inequalities x[leader] >= x[follower] are
 *  only valid when all affected variables share lower bound, upper bound,
 *  and integrality; a mixed-domain component throws std::invalid_argument.
 */
SstCutSet
buildSstCuts( const Instance& instance, const SymComponent& component,
              LeaderRule rule );

/// per-variable binary bounds for lexicographic propagation
enum class BinaryBound : uint8_t
{
   kFree,
   kZero,
   kOne
};

struct LexFixings
{
   bool infeasible = false;
   std::vector<std::pair<int, BinaryBound>> fixings;
};

/** All fixings implied by x lexicographically >= permuted x on the given
 *  binary box; complete with respect to single-variable deductions.
 */
LexFixings
propagateLex( const Permutation& perm, const std::vector<BinaryBound>& bounds );

struct CoverCut
{
   // sum of coeffs[j]*x[j] <= rhs
   std::vector<int> support;
   std::vector<double> coeffs;
   double rhs;
   double violation;
};

/// most violated cover inequality for the symresack of perm, or NONE
std::optional<CoverCut>
separateCover( const Permutation& perm, const std::vector<double>& xstar,
               double minViolation = 1e-6 );

/// operation counter incremented by separateCover; used to assert linear cost
extern thread_local long symmetryOpCounter;

/** Installs symmetry handling for a group given by generators: appends one
 *  linear row per SST cut to the instance and, for components of binary
 *  variables under the kMinIndex rule, registers lexicographic propagation
 *  and cover separation for every generator.
 *
 *  Combining both mechanisms keeps the lexicographically largest point of
 *  every solution orbit, which satisfies the kMinIndex SST cuts; under
 *  kMaxOrbit that compatibility is not guaranteed, so only the SST rows are
 *  installed. Call before solve so the rows reach the relaxation.
 */
void
attachSymmetryHandling( Instance& instance,
                        const std::vector<Permutation>& generators,
                        PluginRegistry& registry,
                        LeaderRule rule = LeaderRule::kMinIndex );

} // namespace minicip

#endif
