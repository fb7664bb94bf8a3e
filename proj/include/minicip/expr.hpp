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

/**@file   expr.hpp
 * @brief  Expression DAG with evaluation, interval propagation, and
 *         reverse-mode differentiation
 *
 * Expressions are stored in a shared directed acyclic graph. Children always
 * carry smaller node ids than their parents, so ascending id order is a
 * topological order. Structurally identical subexpressions are merged on
 * construction (hash-consing). The operator set is deliberately small:
 * variable, constant, sum, product, power with real exponent, exp, log, abs.
 * Division is normalized to a power with exponent -1 at parse time.
 */

#ifndef MINICIP_EXPR_HPP
#define MINICIP_EXPR_HPP

#include "minicip/interval.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace minicip
{

enum class ExprOp : uint8_t
{
   kVar,
   kConst,
   kSum,     // weighted sum with constant offset
   kProduct, // plain product, at least two children
   kPower,   // single child, real exponent in ExprNode::value
   kExp,
   kLog,
   kAbs
};

struct ExprNode
{
   ExprOp op;
   std::vector<int> children;
   std::vector<double> coeffs; // kSum only, parallel to children
   double value = 0.0;         // kConst value, kSum offset, kPower exponent
   int varIndex = -1;          // kVar only

   bool isVar() const { return op == ExprOp::kVar; }
   bool isConst() const { return op == ExprOp::kConst; }
};

/// thrown by the expression parser; position is a 0-based byte offset
class ExprParseError : public std::runtime_error
{
 public:
   ExprParseError( const std::string& msg, size_t position )
       : std::runtime_error( msg ), pos( position )
   {
   }
   size_t pos;
};

/** Immutable-after-construction expression graph.
 *
 *  All construction goes through the make* methods, which canonicalize:
 *  constants are folded, nested sums/products are flattened, duplicate sum
 *  children are merged, and single-child wrappers are collapsed. Identical
 *  subexpressions therefore receive identical node ids.
 */
class ExprDag
{
 public:
   int
   makeVariable( int varIndex );

   int
   makeConstant( double value );

   /// offset + sum of coeffs[i] * children[i]
   int
   makeSum( std::vector<int> children, std::vector<double> coeffs,
            double offset = 0.0 );

   int
   makeProduct( std::vector<int> children );

   int
   makePower( int child, double exponent );

   int
   makeExp( int child );

   int
   makeLog( int child );

   int
   makeAbs( int child );

   const ExprNode&
   node( int id ) const
   {
      return nodes_[static_cast<size_t>( id )];
   }

   int
   numNodes() const
   {
      return static_cast<int>( nodes_.size() );
   }

   const std::vector<int>&
   roots() const
   {
      return roots_;
   }

   void
   addRoot( int id )
   {
      roots_.push_back( id );
   }

   /// largest referenced variable index plus one
   int
   numVariables() const;

   /// marks all nodes reachable from root; ascending ids give a topo order
   std::vector<char>
   reachable( int root ) const;

   /// rebuilds the subdag rooted at root into dest, remapping variable
   /// indices through varMap (identity when empty); returns the new root
   int
   copyTo( ExprDag& dest, int root,
           const std::vector<int>& varMap = {} ) const;

   /// like copyTo, but variables with a negative varMap entry become the
   /// constant fixedVal[original index]
   int
   substituteTo( ExprDag& dest, int root, const std::vector<int>& varMap,
                 const std::vector<double>& fixedVal ) const;

 private:
   int
   intern( ExprNode node );

   std::vector<ExprNode> nodes_;
   std::vector<int> roots_;
   std::unordered_map<uint64_t, std::vector<int>> cache_;
};

/** Parses an infix algebraic expression into the DAG.
 *
 *  Grammar: operators + - * / ^, functions exp/log/abs, parentheses, decimal
 *  literals. '^' expects a constant exponent. Unknown identifiers raise
 *  ExprParseError with the offending position.
 */
int
parseExpression( ExprDag& dag, const std::string& text,
                 const std::map<std::string, int>& varNames );

/// deterministic printer whose output reparses to the identical DAG
std::string
printExpression( const ExprDag& dag, int root,
                 const std::vector<std::string>& varNames );

/// NaN signals a domain error (log of nonpositive, 0^negative, ...)
double
evalExpression( const ExprDag& dag, int root, std::span<const double> x );

/// interval extension of the expression over the given variable box
Interval
intervalEval( const ExprDag& dag, int root, std::span<const Interval> box );

/** One root-to-leaves pass of feasibility-based bound tightening.
 *
 *  Intersects the root's value with target and inverts each operator once.
 *  Every point of box whose value lies in target is retained. Returns false
 *  (and leaves box unspecified) when the constraint is infeasible on box.
 */
bool
backwardPropagate( const ExprDag& dag, int root, const Interval& target,
                   std::span<Interval> box );

/// reverse-mode gradient; empty result signals a domain error at the point
std::vector<double>
gradientExpression( const ExprDag& dag, int root, std::span<const double> x );

} // namespace minicip

#endif
