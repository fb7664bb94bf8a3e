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

#ifndef MINICIP_INSTANCE_HPP
#define MINICIP_INSTANCE_HPP

#include "minicip/expr.hpp"

#include <optional>
#include <string>
#include <vector>

namespace minicip
{

struct Variable
{
   std::string name;
   double lo = -infinity;
   double hi = infinity;
   bool integral = false;

   bool
   isBinary() const
   {
      return integral && lo == 0.0 && hi == 1.0;
   }
};

/// ranged linear row: lhs <= sum_k vals[k] * x[cols[k]] <= rhs
struct LinearRow
{
   std::string name;
   std::vector<int> cols;
   std::vector<double> vals;
   double lhs = -infinity;
   double rhs = infinity;

   double
   coefficient( int col ) const
   {
      for( size_t k = 0; k < cols.size(); ++k )
         if( cols[k] == col )
            return vals[k];
      return 0.0;
   }
};

/// ranged nonlinear row: lhs <= expression(root) <= rhs
struct NonlinearRow
{
   std::string name;
   int root = -1;
   double lhs = -infinity;
   double rhs = infinity;
};

/** A constraint integer program in minimization form.
 *
 *  All nonlinear rows share one expression graph. The objective is linear;
 *  objOffset only shifts reported values.
 */
struct Instance
{
   std::string name = "instance";
   std::vector<Variable> vars;
   std::vector<double> obj;
   double objOffset = 0.0;
   std::vector<LinearRow> linRows;
   std::vector<NonlinearRow> nlRows;
   ExprDag dag;

   int
   numVars() const
   {
      return static_cast<int>( vars.size() );
   }

   int
   varIndex( const std::string& name ) const
   {
      for( size_t i = 0; i < vars.size(); ++i )
         if( vars[i].name == name )
            return static_cast<int>( i );
      return -1;
   }

   std::vector<std::string>
   varNames() const
   {
      std::vector<std::string> names;
      names.reserve( vars.size() );
      for( const Variable& v : vars )
         names.push_back( v.name );
      return names;
   }

   double
   objValue( std::span<const double> x ) const
   {
      double v = objOffset;
      for( size_t j = 0; j < obj.size(); ++j )
         v += obj[j] * x[j];
      return v;
   }

   /// empty result means the instance is well-formed
   std::vector<std::string> validate() const;
};

double
linearActivity( const LinearRow& row, std::span<const double> x );

/** Extracts coefficients and constant from an affine expression node.
 *
 *  Returns NONE when the node is not affine. Relies on the canonical DAG
 *  shape: an affine expression is a constant, a variable, or a flat sum of
 *  variables.
 */
std::optional<std::pair<std::vector<double>, double>>
extractAffine( const ExprDag& dag, int root, int n );

} // namespace minicip

#endif
