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

#include "minicip/instance.hpp"

#include <cmath>
#include <set>

namespace minicip
{

std::vector<std::string>
Instance::validate() const
{
   std::vector<std::string> errors;
   int n = numVars();

   std::set<std::string> names;
   for( const Variable& v : vars )
   {
      if( v.name.empty() )
         errors.push_back( "variable with empty name" );
      if( !names.insert( v.name ).second )
         errors.push_back( "duplicate variable name '" + v.name + "'" );
      if( std::isnan( v.lo ) || std::isnan( v.hi ) || v.lo > v.hi )
         errors.push_back( "invalid bounds on variable '" + v.name + "'" );
   }

   if( static_cast<int>( obj.size() ) != n )
      errors.push_back( "objective length does not match variable count" );
   for( double c : obj )
      if( !std::isfinite( c ) )
         errors.push_back( "nonfinite objective coefficient" );

   std::set<std::string> rowNames;
   auto checkRowName = [&]( const std::string& name ) {
      if( name.empty() )
         errors.push_back( "row with empty name" );
      if( !rowNames.insert( name ).second )
         errors.push_back( "duplicate row name '" + name + "'" );
   };

   for( const LinearRow& row : linRows )
   {
      checkRowName( row.name );
      if( row.cols.size() != row.vals.size() )
         errors.push_back( "row '" + row.name + "' has mismatched arrays" );
      std::set<int> seen;
      for( int c : row.cols )
      {
         if( c < 0 || c >= n )
            errors.push_back( "row '" + row.name +
                              "' references unknown column" );
         else if( !seen.insert( c ).second )
            errors.push_back( "row '" + row.name + "' repeats a column" );
      }
      for( double a : row.vals )
         if( !std::isfinite( a ) )
            errors.push_back( "row '" + row.name +
                              "' has nonfinite coefficient" );
      if( std::isnan( row.lhs ) || std::isnan( row.rhs ) ||
          row.lhs > row.rhs )
         errors.push_back( "row '" + row.name + "' has invalid sides" );
      if( row.lhs == infinity || row.rhs == -infinity )
         errors.push_back( "row '" + row.name + "' has unsatisfiable sides" );
   }

   for( const NonlinearRow& row : nlRows )
   {
      checkRowName( row.name );
      if( row.root < 0 || row.root >= dag.numNodes() )
      {
         errors.push_back( "row '" + row.name +
                           "' references unknown expression" );
         continue;
      }
      std::vector<char> mark = dag.reachable( row.root );
      for( int id = 0; id <= row.root; ++id )
         if( mark[id] && dag.node( id ).isVar() &&
             dag.node( id ).varIndex >= n )
            errors.push_back( "row '" + row.name +
                              "' references undeclared variable" );
      if( std::isnan( row.lhs ) || std::isnan( row.rhs ) ||
          row.lhs > row.rhs )
         errors.push_back( "row '" + row.name + "' has invalid sides" );
   }

   return errors;
}

double
linearActivity( const LinearRow& row, std::span<const double> x )
{
   double a = 0.0;
   for( size_t k = 0; k < row.cols.size(); ++k )
      a += row.vals[k] * x[static_cast<size_t>( row.cols[k] )];
   return a;
}

std::optional<std::pair<std::vector<double>, double>>
extractAffine( const ExprDag& dag, int root, int n )
{
   std::vector<double> coeffs( static_cast<size_t>( n ), 0.0 );
   const ExprNode& node = dag.node( root );
   if( node.isConst() )
      return std::make_pair( coeffs, node.value );
   if( node.isVar() )
   {
      if( node.varIndex >= n )
         return std::nullopt;
      coeffs[static_cast<size_t>( node.varIndex )] = 1.0;
      return std::make_pair( coeffs, 0.0 );
   }
   if( node.op != ExprOp::kSum )
      return std::nullopt;
   for( size_t i = 0; i < node.children.size(); ++i )
   {
      const ExprNode& child = dag.node( node.children[i] );
      if( !child.isVar() || child.varIndex >= n )
         return std::nullopt;
      coeffs[static_cast<size_t>( child.varIndex )] += node.coeffs[i];
   }
   return std::make_pair( coeffs, node.value );
}

} // namespace minicip
