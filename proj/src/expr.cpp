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

#include "minicip/expr.hpp"

#include <cassert>
#include <charconv>
#include <cmath>
#include <cstring>

namespace minicip
{

namespace
{

uint64_t
doubleBits( double v )
{
   // normalize -0.0 so structurally equal nodes hash equally
   if( v == 0.0 )
      v = 0.0;
   uint64_t bits;
   std::memcpy( &bits, &v, sizeof( bits ) );
   return bits;
}

uint64_t
hashWords( const std::vector<uint64_t>& words )
{
   uint64_t h = 1469598103934665603ull;
   for( uint64_t w : words )
   {
      for( int i = 0; i < 8; ++i )
      {
         h ^= ( w >> ( 8 * i ) ) & 0xff;
         h *= 1099511628211ull;
      }
   }
   return h;
}

std::vector<uint64_t>
nodeKey( const ExprNode& n )
{
   std::vector<uint64_t> k;
   k.push_back( static_cast<uint64_t>( n.op ) );
   switch( n.op )
   {
   case ExprOp::kVar:
      k.push_back( static_cast<uint64_t>( n.varIndex ) );
      break;
   case ExprOp::kConst:
   case ExprOp::kPower:
      k.push_back( doubleBits( n.value ) );
      break;
   case ExprOp::kSum:
      k.push_back( doubleBits( n.value ) );
      for( size_t i = 0; i < n.children.size(); ++i )
      {
         k.push_back( static_cast<uint64_t>( n.children[i] ) );
         k.push_back( doubleBits( n.coeffs[i] ) );
      }
      break;
   default:
      break;
   }
   if( n.op != ExprOp::kSum )
      for( int c : n.children )
         k.push_back( static_cast<uint64_t>( c ) );
   return k;
}

bool
structurallyEqual( const ExprNode& a, const ExprNode& b )
{
   if( a.op != b.op || a.varIndex != b.varIndex ||
       doubleBits( a.value ) != doubleBits( b.value ) ||
       a.children != b.children || a.coeffs.size() != b.coeffs.size() )
      return false;
   for( size_t i = 0; i < a.coeffs.size(); ++i )
      if( doubleBits( a.coeffs[i] ) != doubleBits( b.coeffs[i] ) )
         return false;
   return true;
}

/// pointwise power with the solver's domain rules; NaN on domain error
double
evalPow( double base, double p )
{
   if( std::isnan( base ) )
      return base;
   if( p == 0.0 )
      return 1.0;
   bool integral = isIntegralExponent( p );
   if( !integral && base < 0.0 )
      return std::numeric_limits<double>::quiet_NaN();
   if( base == 0.0 && p < 0.0 )
      return std::numeric_limits<double>::quiet_NaN();
   return std::pow( base, p );
}

} // namespace

int
ExprDag::intern( ExprNode node )
{
   uint64_t h = hashWords( nodeKey( node ) );
   auto it = cache_.find( h );
   if( it != cache_.end() )
   {
      for( int id : it->second )
         if( structurallyEqual( nodes_[static_cast<size_t>( id )], node ) )
            return id;
   }
   int id = static_cast<int>( nodes_.size() );
   nodes_.push_back( std::move( node ) );
   cache_[h].push_back( id );
   return id;
}

int
ExprDag::makeVariable( int varIndex )
{
   assert( varIndex >= 0 );
   ExprNode n;
   n.op = ExprOp::kVar;
   n.varIndex = varIndex;
   return intern( std::move( n ) );
}

int
ExprDag::makeConstant( double value )
{
   if( value == 0.0 )
      value = 0.0;
   ExprNode n;
   n.op = ExprOp::kConst;
   n.value = value;
   return intern( std::move( n ) );
}

int
ExprDag::makeSum( std::vector<int> children, std::vector<double> coeffs,
                  double offset )
{
   assert( children.size() == coeffs.size() );

   // flatten nested sums and fold constant children into the offset
   std::vector<int> flatChildren;
   std::vector<double> flatCoeffs;
   for( size_t i = 0; i < children.size(); ++i )
   {
      const ExprNode& c = node( children[i] );
      if( c.isConst() )
      {
         offset += coeffs[i] * c.value;
      }
      else if( c.op == ExprOp::kSum )
      {
         offset += coeffs[i] * c.value;
         for( size_t j = 0; j < c.children.size(); ++j )
         {
            flatChildren.push_back( c.children[j] );
            flatCoeffs.push_back( coeffs[i] * c.coeffs[j] );
         }
      }
      else
      {
         flatChildren.push_back( children[i] );
         flatCoeffs.push_back( coeffs[i] );
      }
   }

   // merge duplicate children, keeping first-occurrence order
   std::vector<int> mergedChildren;
   std::vector<double> mergedCoeffs;
   for( size_t i = 0; i < flatChildren.size(); ++i )
   {
      bool found = false;
      for( size_t j = 0; j < mergedChildren.size(); ++j )
      {
         if( mergedChildren[j] == flatChildren[i] )
         {
            mergedCoeffs[j] += flatCoeffs[i];
            found = true;
            break;
         }
      }
      if( !found )
      {
         mergedChildren.push_back( flatChildren[i] );
         mergedCoeffs.push_back( flatCoeffs[i] );
      }
   }

   std::vector<int> finalChildren;
   std::vector<double> finalCoeffs;
   for( size_t i = 0; i < mergedChildren.size(); ++i )
   {
      if( mergedCoeffs[i] != 0.0 )
      {
         finalChildren.push_back( mergedChildren[i] );
         finalCoeffs.push_back( mergedCoeffs[i] );
      }
   }

   if( finalChildren.empty() )
      return makeConstant( offset );
   if( finalChildren.size() == 1 && finalCoeffs[0] == 1.0 && offset == 0.0 )
      return finalChildren[0];

   if( offset == 0.0 )
      offset = 0.0;
   ExprNode n;
   n.op = ExprOp::kSum;
   n.children = std::move( finalChildren );
   n.coeffs = std::move( finalCoeffs );
   n.value = offset;
   return intern( std::move( n ) );
}

int
ExprDag::makeProduct( std::vector<int> children )
{
   double scalar = 1.0;
   std::vector<int> flat;
   for( int cid : children )
   {
      const ExprNode& c = node( cid );
      if( c.isConst() )
      {
         scalar *= c.value;
      }
      else if( c.op == ExprOp::kProduct )
      {
         for( int g : c.children )
            flat.push_back( g );
      }
      else if( c.op == ExprOp::kSum && c.children.size() == 1 &&
               c.value == 0.0 )
      {
         // pull the scale out of a scaled single term
         scalar *= c.coeffs[0];
         flat.push_back( c.children[0] );
      }
      else
      {
         flat.push_back( cid );
      }
   }

   if( scalar == 0.0 )
      return makeConstant( 0.0 );
   if( flat.empty() )
      return makeConstant( scalar );
   if( flat.size() == 1 )
      return scalar == 1.0 ? flat[0]
                           : makeSum( { flat[0] }, { scalar }, 0.0 );

   ExprNode n;
   n.op = ExprOp::kProduct;
   n.children = std::move( flat );
   int pid = intern( std::move( n ) );
   return scalar == 1.0 ? pid : makeSum( { pid }, { scalar }, 0.0 );
}

int
ExprDag::makePower( int child, double exponent )
{
   if( exponent == 1.0 )
      return child;
   if( exponent == 0.0 )
      return makeConstant( 1.0 );
   const ExprNode& c = node( child );
   if( c.isConst() )
   {
      double v = evalPow( c.value, exponent );
      if( std::isfinite( v ) )
         return makeConstant( v );
   }
   ExprNode n;
   n.op = ExprOp::kPower;
   n.children = { child };
   n.value = exponent;
   return intern( std::move( n ) );
}

int
ExprDag::makeExp( int child )
{
   const ExprNode& c = node( child );
   if( c.isConst() )
   {
      double v = std::exp( c.value );
      if( std::isfinite( v ) )
         return makeConstant( v );
   }
   ExprNode n;
   n.op = ExprOp::kExp;
   n.children = { child };
   return intern( std::move( n ) );
}

int
ExprDag::makeLog( int child )
{
   const ExprNode& c = node( child );
   if( c.isConst() && c.value > 0.0 )
   {
      double v = std::log( c.value );
      if( std::isfinite( v ) )
         return makeConstant( v );
   }
   ExprNode n;
   n.op = ExprOp::kLog;
   n.children = { child };
   return intern( std::move( n ) );
}

int
ExprDag::makeAbs( int child )
{
   const ExprNode& c = node( child );
   if( c.isConst() )
      return makeConstant( std::fabs( c.value ) );
   ExprNode n;
   n.op = ExprOp::kAbs;
   n.children = { child };
   return intern( std::move( n ) );
}

int
ExprDag::numVariables() const
{
   int n = 0;
   for( const ExprNode& node : nodes_ )
      if( node.isVar() )
         n = std::max( n, node.varIndex + 1 );
   return n;
}

std::vector<char>
ExprDag::reachable( int root ) const
{
   std::vector<char> mark( nodes_.size(), 0 );
   std::vector<int> stack{ root };
   while( !stack.empty() )
   {
      int id = stack.back();
      stack.pop_back();
      if( mark[static_cast<size_t>( id )] )
         continue;
      mark[static_cast<size_t>( id )] = 1;
      for( int c : nodes_[static_cast<size_t>( id )].children )
         stack.push_back( c );
   }
   return mark;
}

int
ExprDag::copyTo( ExprDag& dest, int root, const std::vector<int>& varMap ) const
{
   std::vector<char> mark = reachable( root );
   std::vector<int> remap( nodes_.size(), -1 );
   for( int id = 0; id <= root; ++id )
   {
      if( !mark[static_cast<size_t>( id )] )
         continue;
      const ExprNode& n = nodes_[static_cast<size_t>( id )];
      std::vector<int> ch( n.children.size() );
      for( size_t i = 0; i < n.children.size(); ++i )
         ch[i] = remap[static_cast<size_t>( n.children[i] )];
      switch( n.op )
      {
      case ExprOp::kVar:
      {
         int v = n.varIndex;
         if( !varMap.empty() )
         {
            assert( v < static_cast<int>( varMap.size() ) );
            v = varMap[static_cast<size_t>( v )];
            assert( v >= 0 );
         }
         remap[static_cast<size_t>( id )] = dest.makeVariable( v );
         break;
      }
      case ExprOp::kConst:
         remap[static_cast<size_t>( id )] = dest.makeConstant( n.value );
         break;
      case ExprOp::kSum:
         remap[static_cast<size_t>( id )] =
             dest.makeSum( ch, n.coeffs, n.value );
         break;
      case ExprOp::kProduct:
         remap[static_cast<size_t>( id )] = dest.makeProduct( ch );
         break;
      case ExprOp::kPower:
         remap[static_cast<size_t>( id )] = dest.makePower( ch[0], n.value );
         break;
      case ExprOp::kExp:
         remap[static_cast<size_t>( id )] = dest.makeExp( ch[0] );
         break;
      case ExprOp::kLog:
         remap[static_cast<size_t>( id )] = dest.makeLog( ch[0] );
         break;
      case ExprOp::kAbs:
         remap[static_cast<size_t>( id )] = dest.makeAbs( ch[0] );
         break;
      }
   }
   return remap[static_cast<size_t>( root )];
}

int
ExprDag::substituteTo( ExprDag& dest, int root, const std::vector<int>& varMap,
                       const std::vector<double>& fixedVal ) const
{
   std::vector<char> mark = reachable( root );
   std::vector<int> remap( nodes_.size(), -1 );
   for( int id = 0; id <= root; ++id )
   {
      if( !mark[static_cast<size_t>( id )] )
         continue;
      const ExprNode& n = nodes_[static_cast<size_t>( id )];
      std::vector<int> ch( n.children.size() );
      for( size_t i = 0; i < n.children.size(); ++i )
         ch[i] = remap[static_cast<size_t>( n.children[i] )];
      switch( n.op )
      {
      case ExprOp::kVar:
      {
         int v = n.varIndex;
         assert( v < static_cast<int>( varMap.size() ) );
         if( varMap[static_cast<size_t>( v )] >= 0 )
            remap[static_cast<size_t>( id )] =
                dest.makeVariable( varMap[static_cast<size_t>( v )] );
         else
            remap[static_cast<size_t>( id )] =
                dest.makeConstant( fixedVal[static_cast<size_t>( v )] );
         break;
      }
      case ExprOp::kConst:
         remap[static_cast<size_t>( id )] = dest.makeConstant( n.value );
         break;
      case ExprOp::kSum:
         remap[static_cast<size_t>( id )] =
             dest.makeSum( ch, n.coeffs, n.value );
         break;
      case ExprOp::kProduct:
         remap[static_cast<size_t>( id )] = dest.makeProduct( ch );
         break;
      case ExprOp::kPower:
         remap[static_cast<size_t>( id )] = dest.makePower( ch[0], n.value );
         break;
      case ExprOp::kExp:
         remap[static_cast<size_t>( id )] = dest.makeExp( ch[0] );
         break;
      case ExprOp::kLog:
         remap[static_cast<size_t>( id )] = dest.makeLog( ch[0] );
         break;
      case ExprOp::kAbs:
         remap[static_cast<size_t>( id )] = dest.makeAbs( ch[0] );
         break;
      }
   }
   return remap[static_cast<size_t>( root )];
}

/*
 * parser
 */

namespace
{

class Parser
{
 public:
   Parser( ExprDag& dag, const std::string& text,
           const std::map<std::string, int>& varNames )
       : dag_( dag ), text_( text ), vars_( varNames )
   {
   }

   int
   run()
   {
      int id = parseExpr();
      skipSpace();
      if( pos_ != text_.size() )
         fail( "unexpected trailing input" );
      return id;
   }

 private:
   [[noreturn]] void
   fail( const std::string& msg ) const
   {
      throw ExprParseError( msg, pos_ );
   }

   void
   skipSpace()
   {
      while( pos_ < text_.size() && std::isspace(
                 static_cast<unsigned char>( text_[pos_] ) ) )
         ++pos_;
   }

   bool
   consume( char c )
   {
      skipSpace();
      if( pos_ < text_.size() && text_[pos_] == c )
      {
         ++pos_;
         return true;
      }
      return false;
   }

   char
   peek()
   {
      skipSpace();
      return pos_ < text_.size() ? text_[pos_] : '\0';
   }

   int
   parseExpr()
   {
      std::vector<int> children;
      std::vector<double> coeffs;
      double sign = 1.0;
      if( consume( '-' ) )
         sign = -1.0;
      else
         consume( '+' );
      children.push_back( parseTerm() );
      coeffs.push_back( sign );
      for( ;; )
      {
         if( consume( '+' ) )
            sign = 1.0;
         else if( consume( '-' ) )
            sign = -1.0;
         else
            break;
         children.push_back( parseTerm() );
         coeffs.push_back( sign );
      }
      if( children.size() == 1 && coeffs[0] == 1.0 )
         return children[0];
      return dag_.makeSum( std::move( children ), std::move( coeffs ), 0.0 );
   }

   int
   parseTerm()
   {
      std::vector<int> factors{ parseFactor() };
      for( ;; )
      {
         if( consume( '*' ) )
         {
            factors.push_back( parseFactor() );
         }
         else if( consume( '/' ) )
         {
            // a/b is stored as a * b^(-1)
            factors.push_back( dag_.makePower( parseFactor(), -1.0 ) );
         }
         else
            break;
      }
      if( factors.size() == 1 )
         return factors[0];
      return dag_.makeProduct( std::move( factors ) );
   }

   int
   parseFactor()
   {
      if( consume( '-' ) )
         return dag_.makeSum( { parseFactor() }, { -1.0 }, 0.0 );
      if( consume( '+' ) )
         return parseFactor();
      return parsePow();
   }

   int
   parsePow()
   {
      int base = parsePrimary();
      if( consume( '^' ) )
      {
         size_t eppos = pos_;
         int e = parseFactor();
         if( !dag_.node( e ).isConst() )
            throw ExprParseError( "exponent must be a constant", eppos );
         return dag_.makePower( base, dag_.node( e ).value );
      }
      return base;
   }

   int
   parsePrimary()
   {
      skipSpace();
      if( pos_ >= text_.size() )
         fail( "unexpected end of expression" );
      char c = text_[pos_];
      if( c == '(' )
      {
         ++pos_;
         int id = parseExpr();
         if( !consume( ')' ) )
            fail( "expected ')'" );
         return id;
      }
      if( std::isdigit( static_cast<unsigned char>( c ) ) || c == '.' )
         return parseNumber();
      if( std::isalpha( static_cast<unsigned char>( c ) ) || c == '_' )
         return parseIdent();
      fail( std::string( "unexpected character '" ) + c + "'" );
   }

   int
   parseNumber()
   {
      const char* begin = text_.data() + pos_;
      const char* end = text_.data() + text_.size();
      double value = 0.0;
      auto res = std::from_chars( begin, end, value );
      if( res.ec != std::errc() )
         fail( "malformed number" );
      pos_ = static_cast<size_t>( res.ptr - text_.data() );
      return dag_.makeConstant( value );
   }

   int
   parseIdent()
   {
      size_t start = pos_;
      while( pos_ < text_.size() &&
             ( std::isalnum( static_cast<unsigned char>( text_[pos_] ) ) ||
               text_[pos_] == '_' ) )
         ++pos_;
      std::string name = text_.substr( start, pos_ - start );
      if( name == "exp" || name == "log" || name == "abs" )
      {
         if( !consume( '(' ) )
            fail( "expected '(' after function name" );
         int arg = parseExpr();
         if( !consume( ')' ) )
            fail( "expected ')'" );
         if( name == "exp" )
            return dag_.makeExp( arg );
         if( name == "log" )
            return dag_.makeLog( arg );
         return dag_.makeAbs( arg );
      }
      auto it = vars_.find( name );
      if( it == vars_.end() )
         throw ExprParseError( "unknown identifier '" + name + "'", start );
      return dag_.makeVariable( it->second );
   }

   ExprDag& dag_;
   const std::string& text_;
   const std::map<std::string, int>& vars_;
   size_t pos_ = 0;
};

} // namespace

int
parseExpression( ExprDag& dag, const std::string& text,
                 const std::map<std::string, int>& varNames )
{
   return Parser( dag, text, varNames ).run();
}

/*
 * printer
 */

namespace
{

std::string
formatDouble( double v )
{
   if( std::isnan( v ) )
      return "nan";
   if( std::isinf( v ) )
      return v > 0 ? "inf" : "-inf";
   char buf[40];
   auto res = std::to_chars( buf, buf + sizeof( buf ), v );
   return std::string( buf, res.ptr );
}

// precedence: 1 sum, 2 product, 3 power, 4 atoms
int
precedence( const ExprNode& n )
{
   switch( n.op )
   {
   case ExprOp::kSum:
      return 1;
   case ExprOp::kProduct:
      return 2;
   case ExprOp::kPower:
      return 3;
   default:
      return 4;
   }
}

void
printNode( const ExprDag& dag, int id,
           const std::vector<std::string>& varNames, int parentPrec,
           std::string& out )
{
   const ExprNode& n = dag.node( id );
   int prec = precedence( n );
   bool parens = prec < parentPrec;
   if( parens )
      out += '(';

   switch( n.op )
   {
   case ExprOp::kVar:
      out += n.varIndex < static_cast<int>( varNames.size() )
                 ? varNames[static_cast<size_t>( n.varIndex )]
                 : "v" + std::to_string( n.varIndex );
      break;
   case ExprOp::kConst:
      out += formatDouble( n.value );
      break;
   case ExprOp::kSum:
      for( size_t i = 0; i < n.children.size(); ++i )
      {
         double c = n.coeffs[i];
         if( i == 0 )
         {
            if( c < 0 )
               out += '-';
         }
         else
            out += c < 0 ? " - " : " + ";
         double mag = std::fabs( c );
         if( mag != 1.0 )
         {
            out += formatDouble( mag );
            out += '*';
         }
         printNode( dag, n.children[i], varNames, 2, out );
      }
      if( n.value != 0.0 )
      {
         out += n.value < 0 ? " - " : " + ";
         out += formatDouble( std::fabs( n.value ) );
      }
      break;
   case ExprOp::kProduct:
      for( size_t i = 0; i < n.children.size(); ++i )
      {
         if( i > 0 )
            out += '*';
         printNode( dag, n.children[i], varNames, 3, out );
      }
      break;
   case ExprOp::kPower:
   {
      const ExprNode& base = dag.node( n.children[0] );
      bool baseParens = base.isConst() && base.value < 0.0;
      if( baseParens )
         out += '(';
      printNode( dag, n.children[0], varNames, 4, out );
      if( baseParens )
         out += ')';
      out += '^';
      if( n.value < 0 || !isIntegralExponent( n.value ) )
      {
         out += '(';
         out += formatDouble( n.value );
         out += ')';
      }
      else
         out += formatDouble( n.value );
      break;
   }
   case ExprOp::kExp:
   case ExprOp::kLog:
   case ExprOp::kAbs:
      out += n.op == ExprOp::kExp ? "exp" : n.op == ExprOp::kLog ? "log"
                                                                 : "abs";
      out += '(';
      printNode( dag, n.children[0], varNames, 0, out );
      out += ')';
      break;
   }

   if( parens )
      out += ')';
}

} // namespace

std::string
printExpression( const ExprDag& dag, int root,
                 const std::vector<std::string>& varNames )
{
   std::string out;
   printNode( dag, root, varNames, 0, out );
   return out;
}

/*
 * evaluation
 */

double
evalExpression( const ExprDag& dag, int root, std::span<const double> x )
{
   std::vector<char> mark = dag.reachable( root );
   std::vector<double> val( static_cast<size_t>( root ) + 1, 0.0 );
   constexpr double nan = std::numeric_limits<double>::quiet_NaN();

   for( int id = 0; id <= root; ++id )
   {
      if( !mark[static_cast<size_t>( id )] )
         continue;
      const ExprNode& n = dag.node( id );
      double v = 0.0;
      bool childNan = false;
      for( int c : n.children )
         if( std::isnan( val[static_cast<size_t>( c )] ) )
            childNan = true;
      if( childNan )
      {
         val[static_cast<size_t>( id )] = nan;
         continue;
      }
      switch( n.op )
      {
      case ExprOp::kVar:
         assert( n.varIndex < static_cast<int>( x.size() ) );
         v = x[static_cast<size_t>( n.varIndex )];
         break;
      case ExprOp::kConst:
         v = n.value;
         break;
      case ExprOp::kSum:
         v = n.value;
         for( size_t i = 0; i < n.children.size(); ++i )
            v += n.coeffs[i] * val[static_cast<size_t>( n.children[i] )];
         break;
      case ExprOp::kProduct:
         v = 1.0;
         for( int c : n.children )
            v *= val[static_cast<size_t>( c )];
         break;
      case ExprOp::kPower:
         v = evalPow( val[static_cast<size_t>( n.children[0] )], n.value );
         break;
      case ExprOp::kExp:
         v = std::exp( val[static_cast<size_t>( n.children[0] )] );
         break;
      case ExprOp::kLog:
      {
         double a = val[static_cast<size_t>( n.children[0] )];
         v = a > 0.0 ? std::log( a ) : nan;
         break;
      }
      case ExprOp::kAbs:
         v = std::fabs( val[static_cast<size_t>( n.children[0] )] );
         break;
      }
      val[static_cast<size_t>( id )] = v;
   }
   return val[static_cast<size_t>( root )];
}

namespace
{

std::vector<Interval>
forwardIntervals( const ExprDag& dag, int root, std::span<const Interval> box,
                  const std::vector<char>& mark )
{
   std::vector<Interval> val( static_cast<size_t>( root ) + 1 );
   for( int id = 0; id <= root; ++id )
   {
      if( !mark[static_cast<size_t>( id )] )
         continue;
      const ExprNode& n = dag.node( id );
      Interval v;
      switch( n.op )
      {
      case ExprOp::kVar:
         assert( n.varIndex < static_cast<int>( box.size() ) );
         v = box[static_cast<size_t>( n.varIndex )];
         break;
      case ExprOp::kConst:
         v = Interval::point( n.value );
         break;
      case ExprOp::kSum:
         v = Interval::point( n.value );
         for( size_t i = 0; i < n.children.size(); ++i )
            v = v + scale( val[static_cast<size_t>( n.children[i] )],
                           n.coeffs[i] );
         break;
      case ExprOp::kProduct:
         v = val[static_cast<size_t>( n.children[0] )];
         for( size_t i = 1; i < n.children.size(); ++i )
            v = v * val[static_cast<size_t>( n.children[i] )];
         break;
      case ExprOp::kPower:
         v = powIv( val[static_cast<size_t>( n.children[0] )], n.value );
         break;
      case ExprOp::kExp:
         v = expIv( val[static_cast<size_t>( n.children[0] )] );
         break;
      case ExprOp::kLog:
         v = logIv( val[static_cast<size_t>( n.children[0] )] );
         break;
      case ExprOp::kAbs:
         v = absIv( val[static_cast<size_t>( n.children[0] )] );
         break;
      }
      val[static_cast<size_t>( id )] = v;
   }
   return val;
}

/// magnitude-branch merge for inverting even powers and abs:
/// |x| must lie in r, intersected with the current child interval
Interval
mergeMagnitude( const Interval& cur, const Interval& r )
{
   if( r.isEmpty() )
      return Interval::empty();
   if( cur.lo >= 0.0 )
      return intersect( cur, r );
   if( cur.hi <= 0.0 )
      return intersect( cur, -r );
   return intersect( cur, Interval( -r.hi, r.hi ) );
}

/// preimage of target under x -> x^p intersected with cur
Interval
invertPower( const Interval& cur, const Interval& target, double p )
{
   if( target.isEmpty() )
      return Interval::empty();
   if( isIntegralExponent( p ) )
   {
      long long n = static_cast<long long>( p );
      if( n % 2 == 0 )
      {
         // |x|^n = w; for negative n the map is decreasing on (0,inf)
         Interval t = intersect(
             target, n > 0 ? Interval( 0.0, infinity )
                           : Interval( std::numeric_limits<double>::min(),
                                       infinity ) );
         Interval r = powIv( t, 1.0 / p );
         return mergeMagnitude( cur, detail::inflate( r ) );
      }
      // odd exponent: bijection on each sign branch
      if( n > 0 )
      {
         auto sroot = []( double w, double invp ) {
            if( std::isinf( w ) )
               return w;
            return w < 0 ? -std::pow( -w, invp ) : std::pow( w, invp );
         };
         Interval r( sroot( target.lo, 1.0 / p ),
                     sroot( target.hi, 1.0 / p ) );
         return intersect( cur, detail::inflate( r ) );
      }
      // negative odd: invert branchwise and take the hull
      Interval pos = intersect( target, Interval(
          std::numeric_limits<double>::min(), infinity ) );
      Interval neg = intersect( target, Interval(
          -infinity, -std::numeric_limits<double>::min() ) );
      Interval r = Interval::empty();
      if( !pos.isEmpty() )
         r = hull( r, powIv( pos, 1.0 / p ) );
      if( !neg.isEmpty() )
         r = hull( r, -powIv( -neg, 1.0 / p ) );
      if( target.contains( 0.0 ) )
         return cur; // w=0 has unbounded preimage closure; no tightening
      return intersect( cur, detail::inflate( r ) );
   }
   // fractional exponent: domain restricted to x >= 0
   Interval t = intersect( target, p > 0
                                       ? Interval( 0.0, infinity )
                                       : Interval(
                                             std::numeric_limits<double>::min(),
                                             infinity ) );
   Interval r = powIv( t, 1.0 / p );
   return intersect( intersect( cur, Interval( 0.0, infinity ) ),
                     detail::inflate( r ) );
}

} // namespace

Interval
intervalEval( const ExprDag& dag, int root, std::span<const Interval> box )
{
   std::vector<char> mark = dag.reachable( root );
   return forwardIntervals( dag, root, box, mark )[static_cast<size_t>( root )];
}

bool
backwardPropagate( const ExprDag& dag, int root, const Interval& target,
                   std::span<Interval> box )
{
   std::vector<char> mark = dag.reachable( root );
   std::vector<Interval> cur = forwardIntervals( dag, root, box, mark );

   cur[static_cast<size_t>( root )] =
       intersect( cur[static_cast<size_t>( root )], target );
   if( cur[static_cast<size_t>( root )].isEmpty() )
      return false;

   for( int id = root; id >= 0; --id )
   {
      if( !mark[static_cast<size_t>( id )] )
         continue;
      const ExprNode& n = dag.node( id );
      const Interval t = cur[static_cast<size_t>( id )];
      if( t.isEmpty() )
         return false;

      switch( n.op )
      {
      case ExprOp::kVar:
      case ExprOp::kConst:
         break;
      case ExprOp::kSum:
         for( size_t i = 0; i < n.children.size(); ++i )
         {
            Interval rest = Interval::point( n.value );
            for( size_t j = 0; j < n.children.size(); ++j )
               if( j != i )
                  rest = rest +
                         scale( cur[static_cast<size_t>( n.children[j] )],
                                n.coeffs[j] );
            Interval& child = cur[static_cast<size_t>( n.children[i] )];
            child = intersect(
                child, scale( t - rest, 1.0 / n.coeffs[i] ) );
            if( child.isEmpty() )
               return false;
         }
         break;
      case ExprOp::kProduct:
         for( size_t i = 0; i < n.children.size(); ++i )
         {
            Interval others = Interval::point( 1.0 );
            for( size_t j = 0; j < n.children.size(); ++j )
               if( j != i )
                  others = others * cur[static_cast<size_t>( n.children[j] )];
            Interval& child = cur[static_cast<size_t>( n.children[i] )];
            child = intersect( child, t * reciprocal( others ) );
            if( child.isEmpty() )
               return false;
         }
         break;
      case ExprOp::kPower:
      {
         Interval& child = cur[static_cast<size_t>( n.children[0] )];
         child = invertPower( child, t, n.value );
         if( child.isEmpty() )
            return false;
         break;
      }
      case ExprOp::kExp:
      {
         Interval& child = cur[static_cast<size_t>( n.children[0] )];
         child = intersect( child, logIv( t ) );
         if( child.isEmpty() )
            return false;
         break;
      }
      case ExprOp::kLog:
      {
         Interval& child = cur[static_cast<size_t>( n.children[0] )];
         child = intersect( child, expIv( t ) );
         if( child.isEmpty() )
            return false;
         break;
      }
      case ExprOp::kAbs:
      {
         Interval& child = cur[static_cast<size_t>( n.children[0] )];
         child = mergeMagnitude( child,
                                 intersect( t, Interval( 0.0, infinity ) ) );
         if( child.isEmpty() )
            return false;
         break;
      }
      }
   }

   for( int id = 0; id <= root; ++id )
   {
      if( !mark[static_cast<size_t>( id )] )
         continue;
      const ExprNode& n = dag.node( id );
      if( n.isVar() )
      {
         Interval& b = box[static_cast<size_t>( n.varIndex )];
         b = intersect( b, cur[static_cast<size_t>( id )] );
         if( b.isEmpty() )
            return false;
      }
   }
   return true;
}

std::vector<double>
gradientExpression( const ExprDag& dag, int root, std::span<const double> x )
{
   std::vector<char> mark = dag.reachable( root );
   std::vector<double> val( static_cast<size_t>( root ) + 1, 0.0 );
   for( int id = 0; id <= root; ++id )
   {
      if( !mark[static_cast<size_t>( id )] )
         continue;
      // forward values via the scalar evaluator rules
      const ExprNode& n = dag.node( id );
      double v = 0.0;
      switch( n.op )
      {
      case ExprOp::kVar:
         v = x[static_cast<size_t>( n.varIndex )];
         break;
      case ExprOp::kConst:
         v = n.value;
         break;
      case ExprOp::kSum:
         v = n.value;
         for( size_t i = 0; i < n.children.size(); ++i )
            v += n.coeffs[i] * val[static_cast<size_t>( n.children[i] )];
         break;
      case ExprOp::kProduct:
         v = 1.0;
         for( int c : n.children )
            v *= val[static_cast<size_t>( c )];
         break;
      case ExprOp::kPower:
         v = evalPow( val[static_cast<size_t>( n.children[0] )], n.value );
         break;
      case ExprOp::kExp:
         v = std::exp( val[static_cast<size_t>( n.children[0] )] );
         break;
      case ExprOp::kLog:
      {
         double a = val[static_cast<size_t>( n.children[0] )];
         v = a > 0.0 ? std::log( a )
                     : std::numeric_limits<double>::quiet_NaN();
         break;
      }
      case ExprOp::kAbs:
         v = std::fabs( val[static_cast<size_t>( n.children[0] )] );
         break;
      }
      if( std::isnan( v ) )
         return {};
      val[static_cast<size_t>( id )] = v;
   }

   std::vector<double> adj( static_cast<size_t>( root ) + 1, 0.0 );
   adj[static_cast<size_t>( root )] = 1.0;
   for( int id = root; id >= 0; --id )
   {
      if( !mark[static_cast<size_t>( id )] || adj[static_cast<size_t>( id )] == 0.0 )
         continue;
      const ExprNode& n = dag.node( id );
      double a = adj[static_cast<size_t>( id )];
      switch( n.op )
      {
      case ExprOp::kVar:
      case ExprOp::kConst:
         break;
      case ExprOp::kSum:
         for( size_t i = 0; i < n.children.size(); ++i )
            adj[static_cast<size_t>( n.children[i] )] += a * n.coeffs[i];
         break;
      case ExprOp::kProduct:
         for( size_t i = 0; i < n.children.size(); ++i )
         {
            double prod = 1.0;
            for( size_t j = 0; j < n.children.size(); ++j )
               if( j != i )
                  prod *= val[static_cast<size_t>( n.children[j] )];
            adj[static_cast<size_t>( n.children[i] )] += a * prod;
         }
         break;
      case ExprOp::kPower:
      {
         double base = val[static_cast<size_t>( n.children[0] )];
         double d = n.value * evalPow( base, n.value - 1.0 );
         if( std::isnan( d ) || std::isinf( d ) )
            return {};
         adj[static_cast<size_t>( n.children[0] )] += a * d;
         break;
      }
      case ExprOp::kExp:
         adj[static_cast<size_t>( n.children[0] )] +=
             a * val[static_cast<size_t>( id )];
         break;
      case ExprOp::kLog:
         adj[static_cast<size_t>( n.children[0] )] +=
             a / val[static_cast<size_t>( n.children[0] )];
         break;
      case ExprOp::kAbs:
      {
         // subgradient 0 at the kink
         double base = val[static_cast<size_t>( n.children[0] )];
         double s = base > 0.0 ? 1.0 : base < 0.0 ? -1.0 : 0.0;
         adj[static_cast<size_t>( n.children[0] )] += a * s;
         break;
      }
      }
   }

   std::vector<double> grad( x.size(), 0.0 );
   for( int id = 0; id <= root; ++id )
   {
      if( !mark[static_cast<size_t>( id )] )
         continue;
      const ExprNode& n = dag.node( id );
      if( n.isVar() )
         grad[static_cast<size_t>( n.varIndex )] =
             adj[static_cast<size_t>( id )];
   }
   return grad;
}

} // namespace minicip
