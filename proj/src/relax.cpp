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

#include "minicip/relax.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace minicip
{

namespace
{

enum Curv : char
{
   kCAffine,
   kCConvex,
   kCConcave,
   kCNone
};

Curv
flipCurv( Curv c )
{
   if( c == kCConvex )
      return kCConcave;
   if( c == kCConcave )
      return kCConvex;
   return c;
}

std::vector<Interval>
paddedBox( const ExprDag& dag, std::span<const Interval> varBounds )
{
   size_t n = static_cast<size_t>( dag.numVariables() );
   std::vector<Interval> box( std::max( n, varBounds.size() ),
                              Interval::entire() );
   for( size_t j = 0; j < varBounds.size(); ++j )
      box[j] = varBounds[j];
   return box;
}

/** curvature of the subexpression by a composition calculus; sign conditions
 *  come from interval images over box */
Curv
curvature( const ExprDag& dag, int id, std::span<const Interval> box,
           std::vector<char>& memo )
{
   if( memo[id] != -1 )
      return static_cast<Curv>( memo[id] );
   const ExprNode& n = dag.node( id );
   Curv res = kCNone;
   switch( n.op )
   {
   case ExprOp::kVar:
   case ExprOp::kConst:
      res = kCAffine;
      break;
   case ExprOp::kSum:
   {
      bool allAffine = true;
      bool convexOk = true;
      bool concaveOk = true;
      for( size_t k = 0; k < n.children.size(); ++k )
      {
         Curv c = curvature( dag, n.children[k], box, memo );
         if( n.coeffs[k] < 0.0 )
            c = flipCurv( c );
         allAffine = allAffine && c == kCAffine;
         convexOk = convexOk && ( c == kCAffine || c == kCConvex );
         concaveOk = concaveOk && ( c == kCAffine || c == kCConcave );
      }
      if( allAffine )
         res = kCAffine;
      else if( convexOk )
         res = kCConvex;
      else if( concaveOk )
         res = kCConcave;
      break;
   }
   case ExprOp::kProduct:
      res = kCNone;
      break;
   case ExprOp::kPower:
   {
      Curv bc = curvature( dag, n.children[0], box, memo );
      Interval ib = intervalEval( dag, n.children[0], box );
      double p = n.value;
      bool isInt = isIntegralExponent( p );
      bool even = isInt && std::fmod( std::fabs( p ), 2.0 ) < 0.5;
      if( p == 0.0 )
         res = kCAffine;
      else if( p == 1.0 )
         res = bc;
      else if( p > 1.0 && isInt && even )
      {
         if( bc == kCAffine )
            res = kCConvex;
         else if( bc == kCConvex && ib.lo >= 0.0 )
            res = kCConvex;
         else if( bc == kCConcave && ib.hi <= 0.0 )
            res = kCConvex;
      }
      else if( p > 1.0 && isInt )
      {
         if( ib.lo >= 0.0 && ( bc == kCAffine || bc == kCConvex ) )
            res = kCConvex;
         else if( ib.hi <= 0.0 && ( bc == kCAffine || bc == kCConcave ) )
            res = kCConcave;
      }
      else if( p > 1.0 )
      {
         if( ib.lo >= 0.0 && ( bc == kCAffine || bc == kCConvex ) )
            res = kCConvex;
      }
      else if( p > 0.0 )
      {
         // fractional exponent below one, concave on its domain
         if( ib.lo >= 0.0 && ( bc == kCAffine || bc == kCConcave ) )
            res = kCConcave;
      }
      else
      {
         if( ib.lo > 0.0 && ( bc == kCAffine || bc == kCConcave ) )
            res = kCConvex;
         else if( ib.hi < 0.0 && isInt )
         {
            if( even && ( bc == kCAffine || bc == kCConvex ) )
               res = kCConvex;
            else if( !even && ( bc == kCAffine || bc == kCConvex ) )
               res = kCConcave;
         }
      }
      break;
   }
   case ExprOp::kExp:
   {
      Curv bc = curvature( dag, n.children[0], box, memo );
      if( bc == kCAffine || bc == kCConvex )
         res = kCConvex;
      break;
   }
   case ExprOp::kLog:
   {
      Curv bc = curvature( dag, n.children[0], box, memo );
      if( bc == kCAffine || bc == kCConcave )
         res = kCConcave;
      break;
   }
   case ExprOp::kAbs:
   {
      Curv bc = curvature( dag, n.children[0], box, memo );
      Interval ib = intervalEval( dag, n.children[0], box );
      if( bc == kCAffine )
         res = kCConvex;
      else if( ( bc == kCConvex && ib.lo >= 0.0 ) ||
               ( bc == kCConcave && ib.hi <= 0.0 ) )
         res = kCConvex;
      else if( ( bc == kCConcave && ib.lo >= 0.0 ) ||
               ( bc == kCConvex && ib.hi <= 0.0 ) )
         res = kCConcave;
      break;
   }
   }
   memo[id] = static_cast<char>( res );
   return res;
}

bool
isSquareTerm( const ExprNode& n )
{
   return n.op == ExprOp::kPower && n.value == 2.0;
}

bool
isProductOfTwo( const ExprNode& n )
{
   return n.op == ExprOp::kProduct && n.children.size() == 2;
}

} // namespace

StructureTag
detectStructure( const ExprDag& dag, int node,
                 std::span<const Interval> varBounds )
{
   std::vector<Interval> box = paddedBox( dag, varBounds );
   std::vector<char> memo( dag.numNodes(), -1 );
   Curv cur = curvature( dag, node, box, memo );

   StructureTag tag;
   if( cur == kCAffine )
   {
      tag.kind = StructureKind::kLinear;
      tag.evidence = { node };
      return tag;
   }

   const ExprNode& n = dag.node( node );
   if( n.op == ExprOp::kSum )
   {
      bool shapeOk = true;
      std::vector<int> quadTerms;
      for( int child : n.children )
      {
         const ExprNode& c = dag.node( child );
         if( isSquareTerm( c ) || isProductOfTwo( c ) )
            quadTerms.push_back( child );
         else if( !c.isVar() )
            shapeOk = false;
      }
      if( shapeOk && !quadTerms.empty() )
      {
         tag.kind = StructureKind::kQuadratic;
         tag.evidence = quadTerms;
         return tag;
      }
   }

   if( cur == kCConvex )
   {
      tag.kind = StructureKind::kConvex;
      tag.evidence = { node };
      return tag;
   }
   if( cur == kCConcave )
   {
      tag.kind = StructureKind::kConcave;
      tag.evidence = { node };
      return tag;
   }
   if( isProductOfTwo( n ) )
   {
      tag.kind = StructureKind::kBilinear;
      tag.evidence = n.children;
      return tag;
   }
   tag.kind = StructureKind::kDefault;
   return tag;
}

namespace
{

/** Builds the extended formulation row by row.
 *
 *  Roots with a single-handler tag (linear, convex, concave) are copied
 *  whole. All other roots are rebuilt so that every operator sits on
 *  arguments that are affine over original and auxiliary variables; any
 *  deeper subexpression becomes an auxiliary variable with a pending
 *  defining row.
 */
struct ExtBuilder
{
   const Instance& inst;
   ExtendedForm& ext;
   std::vector<Interval> origBox;
   std::unordered_map<int, int> auxOf;       // original node -> ext var
   std::unordered_map<int, int> memoEst;     // original node -> ext node
   std::unordered_map<int, int> memoAtom;    // original node -> ext node
   struct Pending
   {
      int var;
      int origNode;
   };
   std::vector<Pending> pending;

   ExtBuilder( const Instance& instance, ExtendedForm& form )
       : inst( instance ), ext( form )
   {
      for( const Variable& v : inst.vars )
         origBox.push_back( Interval{ v.lo, v.hi } );
   }

   int
   auxFor( int origNode )
   {
      auto it = auxOf.find( origNode );
      if( it != auxOf.end() )
         return it->second;
      Interval image = intervalEval( inst.dag, origNode, origBox );
      if( image.isEmpty() )
         ext.infeasible = true;
      int var = ext.numVars();
      ext.lo.push_back( image.lo );
      ext.hi.push_back( image.hi );
      ext.origin.push_back( VarOrigin::kAuxiliary );
      ext.auxVars.push_back( AuxVar{ var, -1, image } );
      auxOf.emplace( origNode, var );
      pending.push_back( Pending{ var, origNode } );
      return var;
   }

   /// affine-over-atoms rebuild: sums stay, anything deeper becomes an aux
   int
   makeAtom( int id )
   {
      auto it = memoAtom.find( id );
      if( it != memoAtom.end() )
         return it->second;
      const ExprNode& n = inst.dag.node( id );
      int res;
      if( n.isVar() )
         res = ext.dag.makeVariable( n.varIndex );
      else if( n.isConst() )
         res = ext.dag.makeConstant( n.value );
      else if( n.op == ExprOp::kSum )
      {
         std::vector<int> kids;
         for( int child : n.children )
            kids.push_back( makeAtom( child ) );
         res = ext.dag.makeSum( kids, n.coeffs, n.value );
      }
      else
         res = ext.dag.makeVariable( auxFor( id ) );
      memoAtom.emplace( id, res );
      return res;
   }

   /// estimable rebuild: every operator receives affine-over-atom arguments
   int
   makeEstimable( int id )
   {
      auto it = memoEst.find( id );
      if( it != memoEst.end() )
         return it->second;
      const ExprNode& n = inst.dag.node( id );
      int res;
      switch( n.op )
      {
      case ExprOp::kVar:
         res = ext.dag.makeVariable( n.varIndex );
         break;
      case ExprOp::kConst:
         res = ext.dag.makeConstant( n.value );
         break;
      case ExprOp::kSum:
      {
         std::vector<int> kids;
         for( int child : n.children )
            kids.push_back( makeEstimable( child ) );
         res = ext.dag.makeSum( kids, n.coeffs, n.value );
         break;
      }
      case ExprOp::kProduct:
      {
         std::vector<int> kids;
         for( int child : n.children )
            kids.push_back( makeAtom( child ) );
         res = ext.dag.makeProduct( kids );
         break;
      }
      case ExprOp::kPower:
         res = ext.dag.makePower( makeAtom( n.children[0] ), n.value );
         break;
      case ExprOp::kExp:
         res = ext.dag.makeExp( makeAtom( n.children[0] ) );
         break;
      case ExprOp::kLog:
         res = ext.dag.makeLog( makeAtom( n.children[0] ) );
         break;
      case ExprOp::kAbs:
      default:
         res = ext.dag.makeAbs( makeAtom( n.children[0] ) );
         break;
      }
      memoEst.emplace( id, res );
      return res;
   }

   int
   rebuildRoot( int origRoot )
   {
      StructureTag tag = detectStructure( inst.dag, origRoot, origBox );
      if( tag.kind == StructureKind::kLinear ||
          tag.kind == StructureKind::kConvex ||
          tag.kind == StructureKind::kConcave )
         return inst.dag.copyTo( ext.dag, origRoot );
      return makeEstimable( origRoot );
   }
};

} // namespace

ExtendedForm
buildExtendedFormulation( const Instance& instance )
{
   ExtendedForm ext;
   int n = instance.numVars();
   int m = static_cast<int>( instance.nlRows.size() );
   ext.numOriginal = n;
   for( const Variable& v : instance.vars )
   {
      ext.lo.push_back( v.lo );
      ext.hi.push_back( v.hi );
      ext.origin.push_back( VarOrigin::kOriginal );
   }
   for( const NonlinearRow& row : instance.nlRows )
   {
      ext.lo.push_back( row.lhs );
      ext.hi.push_back( row.rhs );
      ext.origin.push_back( VarOrigin::kSlack );
   }

   ExtBuilder builder( instance, ext );
   for( int r = 0; r < m; ++r )
   {
      int h = builder.rebuildRoot( instance.nlRows[r].root );
      ext.rows.push_back( ExtRow{ h, n + r } );
   }

   // pending grows while definitions spawn deeper auxiliaries
   std::vector<std::pair<int, int>> auxRows; // (original node, pending index)
   for( size_t i = 0; i < builder.pending.size(); ++i )
   {
      int h = builder.rebuildRoot( builder.pending[i].origNode );
      int var = builder.pending[i].var;
      ext.auxVars[var - n - m].node = h;
      auxRows.emplace_back( builder.pending[i].origNode,
                            static_cast<int>( i ) );
   }

   // definitions of contained subexpressions carry smaller original node
   // ids, so descending id order makes every reference point forward
   std::sort( auxRows.begin(), auxRows.end(),
              []( const auto& a, const auto& b ) { return a.first > b.first; } );
   for( const auto& [origNode, idx] : auxRows )
   {
      int var = builder.pending[idx].var;
      ext.rows.push_back( ExtRow{ ext.auxVars[var - n - m].node, var } );
   }
   return ext;
}

namespace
{

/// dense working form of an affine estimator
struct DenseEst
{
   std::vector<double> g;
   double c = 0.0;
};

bool
finiteEst( const DenseEst& e )
{
   if( !std::isfinite( e.c ) )
      return false;
   for( double v : e.g )
      if( !std::isfinite( v ) || std::fabs( v ) > 1e12 )
         return false;
   return true;
}

double
estValue( const DenseEst& e, std::span<const double> x )
{
   double v = e.c;
   for( size_t j = 0; j < e.g.size(); ++j )
      if( e.g[j] != 0.0 )
         v += e.g[j] * x[j];
   return v;
}

std::optional<DenseEst>
affineOf( const ExprDag& dag, int id, size_t nvars )
{
   auto aff = extractAffine( dag, id, static_cast<int>( nvars ) );
   if( !aff )
      return std::nullopt;
   return DenseEst{ std::move( aff->first ), aff->second };
}

struct EstContext
{
   const ExprDag& dag;
   std::span<const Interval> box;
   std::span<const double> ref;
   size_t nvars;
};

std::optional<DenseEst> estimateNode( const EstContext& ctx, int id,
                                      bool over );

/** univariate curvature of t^p over the interval; kCNone when the sign of
 *  the base is not decided */
Curv
powerCurv( double p, const Interval& ib )
{
   bool isInt = isIntegralExponent( p );
   bool even = isInt && std::fmod( std::fabs( p ), 2.0 ) < 0.5;
   if( p == 0.0 || p == 1.0 )
      return kCAffine;
   if( p > 1.0 && even )
      return kCConvex;
   if( p > 1.0 && isInt )
      return ib.lo >= 0.0 ? kCConvex : ib.hi <= 0.0 ? kCConcave : kCNone;
   if( p > 1.0 )
      return ib.lo >= 0.0 ? kCConvex : kCNone;
   if( p > 0.0 )
      return ib.lo >= 0.0 ? kCConcave : kCNone;
   if( ib.lo > 0.0 )
      return kCConvex;
   if( ib.hi < 0.0 && isInt )
      return even ? kCConvex : kCConcave;
   return kCNone;
}

/** tangent or secant of the scalar function f on [ib.lo, ib.hi], composed
 *  with the affine argument arg */
std::optional<DenseEst>
univariateEst( const DenseEst& arg, const Interval& ib, double ustar,
               double ( *f )( double, double ), double ( *fd )( double, double ),
               double param, Curv curv, bool over )
{
   if( curv == kCNone || ib.isEmpty() )
      return std::nullopt;
   bool tangent = ( curv == kCConvex ) != over;
   double a, b; // estimator a*t + b in the argument value t
   if( ib.hi - ib.lo <= 0.0 )
   {
      double v = f( ib.lo, param );
      if( !std::isfinite( v ) )
         return std::nullopt;
      a = 0.0;
      b = v;
   }
   else if( tangent )
   {
      double u = std::min( std::max( ustar, ib.lo ), ib.hi );
      double fv = f( u, param );
      double dv = fd( u, param );
      if( !std::isfinite( fv ) || !std::isfinite( dv ) ||
          std::fabs( dv ) > 1e12 )
         return std::nullopt;
      a = dv;
      b = fv - dv * u;
   }
   else
   {
      if( ib.lo <= -infinity || ib.hi >= infinity )
         return std::nullopt;
      double flo = f( ib.lo, param );
      double fhi = f( ib.hi, param );
      if( !std::isfinite( flo ) || !std::isfinite( fhi ) )
         return std::nullopt;
      a = ( fhi - flo ) / ( ib.hi - ib.lo );
      if( !std::isfinite( a ) || std::fabs( a ) > 1e12 )
         return std::nullopt;
      b = flo - a * ib.lo;
   }
   DenseEst res;
   res.g.resize( arg.g.size(), 0.0 );
   for( size_t j = 0; j < arg.g.size(); ++j )
      res.g[j] = a * arg.g[j];
   res.c = a * arg.c + b;
   if( !finiteEst( res ) )
      return std::nullopt;
   return res;
}

double
powF( double t, double p )
{
   if( p == 0.0 )
      return 1.0;
   return std::pow( t, p );
}

double
powD( double t, double p )
{
   return p * std::pow( t, p - 1.0 );
}

double
expF( double t, double )
{
   return std::exp( t );
}

double
expD( double t, double )
{
   return std::exp( t );
}

double
logF( double t, double )
{
   return t > 0.0 ? std::log( t ) : std::numeric_limits<double>::quiet_NaN();
}

double
logD( double t, double )
{
   return t > 0.0 ? 1.0 / t : std::numeric_limits<double>::quiet_NaN();
}

double
absF( double t, double )
{
   return std::fabs( t );
}

double
absD( double t, double )
{
   return t > 0.0 ? 1.0 : t < 0.0 ? -1.0 : 0.0;
}

/** one-sided McCormick composition for a product of factors; the first
 *  affine factor is split off, the remaining product is bounded by its
 *  interval and replaced by a recursive estimator */
std::optional<DenseEst>
estimateProduct( const EstContext& ctx, const std::vector<int>& children,
                 bool over )
{
   if( children.size() == 1 )
      return estimateNode( ctx, children[0], over );

   int uIdx = -1;
   std::optional<DenseEst> u;
   for( size_t k = 0; k < children.size(); ++k )
   {
      u = affineOf( ctx.dag, children[k], ctx.nvars );
      if( u )
      {
         uIdx = static_cast<int>( k );
         break;
      }
   }
   if( uIdx < 0 )
      return std::nullopt;

   std::vector<int> rest;
   for( size_t k = 0; k < children.size(); ++k )
      if( static_cast<int>( k ) != uIdx )
         rest.push_back( children[k] );

   Interval iu = intervalEval( ctx.dag, children[uIdx], ctx.box );
   Interval iv = Interval::point( 1.0 );
   for( int child : rest )
      iv = iv * intervalEval( ctx.dag, child, ctx.box );
   if( iu.isEmpty() || iv.isEmpty() )
      return std::nullopt;

   // candidate corners (ub, vb): over pieces mix opposite bounds
   struct Corner
   {
      double ub, vb;
   };
   Corner corners[2];
   if( !over )
   {
      corners[0] = { iu.lo, iv.lo };
      corners[1] = { iu.hi, iv.hi };
   }
   else
   {
      corners[0] = { iu.hi, iv.lo };
      corners[1] = { iu.lo, iv.hi };
   }

   std::optional<DenseEst> best;
   double bestVal = 0.0;
   for( const Corner& corner : corners )
   {
      if( corner.ub <= -infinity || corner.ub >= infinity ||
          corner.vb <= -infinity || corner.vb >= infinity )
         continue;
      // piece: vb*u + ub*v - ub*vb with v replaced by an estimator whose
      // side matches the sign of ub
      std::optional<DenseEst> vEst;
      if( corner.ub == 0.0 )
         vEst = DenseEst{ std::vector<double>( ctx.nvars, 0.0 ), 0.0 };
      else
      {
         bool vSide = ( corner.ub > 0.0 ) == over;
         vEst = estimateProduct( ctx, rest, vSide );
      }
      if( !vEst )
         continue;
      DenseEst piece;
      piece.g.resize( ctx.nvars, 0.0 );
      for( size_t j = 0; j < ctx.nvars; ++j )
         piece.g[j] = corner.vb * u->g[j] + corner.ub * vEst->g[j];
      piece.c = corner.vb * u->c + corner.ub * vEst->c -
                corner.ub * corner.vb;
      if( !finiteEst( piece ) )
         continue;
      double val = estValue( piece, ctx.ref );
      if( !best || ( over ? val < bestVal : val > bestVal ) )
      {
         best = std::move( piece );
         bestVal = val;
      }
   }
   return best;
}

std::optional<DenseEst>
estimateNode( const EstContext& ctx, int id, bool over )
{
   if( auto aff = affineOf( ctx.dag, id, ctx.nvars ) )
      return aff;

   const ExprNode& n = ctx.dag.node( id );
   switch( n.op )
   {
   case ExprOp::kSum:
   {
      DenseEst res;
      res.g.resize( ctx.nvars, 0.0 );
      res.c = n.value;
      for( size_t k = 0; k < n.children.size(); ++k )
      {
         double coeff = n.coeffs[k];
         bool side = coeff >= 0.0 ? over : !over;
         auto sub = estimateNode( ctx, n.children[k], side );
         if( !sub )
            return std::nullopt;
         for( size_t j = 0; j < ctx.nvars; ++j )
            res.g[j] += coeff * sub->g[j];
         res.c += coeff * sub->c;
      }
      if( !finiteEst( res ) )
         return std::nullopt;
      return res;
   }
   case ExprOp::kProduct:
      return estimateProduct( ctx, n.children, over );
   case ExprOp::kPower:
   case ExprOp::kExp:
   case ExprOp::kLog:
   case ExprOp::kAbs:
   {
      auto arg = affineOf( ctx.dag, n.children[0], ctx.nvars );
      if( !arg )
         return std::nullopt;
      Interval ib = intervalEval( ctx.dag, n.children[0], ctx.box );
      double ustar = estValue( *arg, ctx.ref );
      switch( n.op )
      {
      case ExprOp::kPower:
      {
         Interval dom = ib;
         if( !isIntegralExponent( n.value ) )
            dom = intersect( dom, Interval{ 0.0, infinity } );
         if( dom.isEmpty() )
            return std::nullopt;
         return univariateEst( *arg, dom, ustar, powF, powD, n.value,
                               powerCurv( n.value, dom ), over );
      }
      case ExprOp::kExp:
         return univariateEst( *arg, ib, ustar, expF, expD, 0.0, kCConvex,
                               over );
      case ExprOp::kLog:
      {
         if( ib.lo <= 0.0 )
            return std::nullopt;
         return univariateEst( *arg, ib, ustar, logF, logD, 0.0, kCConcave,
                               over );
      }
      default:
         return univariateEst( *arg, ib, ustar, absF, absD, 0.0, kCConvex,
                               over );
      }
   }
   default:
      return std::nullopt;
   }
}

std::optional<DenseEst>
gradientCut( const ExprDag& dag, int node, std::span<const Interval> box,
             std::span<const double> refPoint, size_t nvars )
{
   std::vector<double> ref( refPoint.begin(), refPoint.end() );
   ref.resize( std::max( ref.size(), nvars ), 0.0 );
   for( size_t j = 0; j < box.size() && j < ref.size(); ++j )
      ref[j] = std::min( std::max( ref[j], box[j].lo ), box[j].hi );
   double f0 = evalExpression( dag, node, ref );
   if( !std::isfinite( f0 ) )
      return std::nullopt;
   std::vector<double> g = gradientExpression( dag, node, ref );
   if( g.empty() )
      return std::nullopt;
   DenseEst res;
   res.g.assign( nvars, 0.0 );
   res.c = f0;
   for( size_t j = 0; j < g.size(); ++j )
   {
      if( !std::isfinite( g[j] ) || std::fabs( g[j] ) > 1e12 )
         return std::nullopt;
      res.g[j] = g[j];
      res.c -= g[j] * ref[j];
   }
   if( !finiteEst( res ) )
      return std::nullopt;
   return res;
}

/** positive semidefiniteness by pivoted elimination with a small tolerance */
bool
isPsd( std::vector<std::vector<double>> h )
{
   size_t k = h.size();
   for( size_t step = 0; step < k; ++step )
   {
      size_t piv = step;
      for( size_t i = step; i < k; ++i )
         if( h[i][i] > h[piv][piv] )
            piv = i;
      if( h[piv][piv] < -1e-9 )
         return false;
      if( h[piv][piv] <= 1e-9 )
      {
         // zero diagonal block: all remaining off-diagonals must vanish
         for( size_t i = step; i < k; ++i )
            for( size_t j = step; j < k; ++j )
               if( std::fabs( h[i][j] ) > 1e-7 )
                  return false;
         return true;
      }
      std::swap( h[piv], h[step] );
      for( size_t i = 0; i < k; ++i )
         std::swap( h[i][piv], h[i][step] );
      double d = h[step][step];
      for( size_t i = step + 1; i < k; ++i )
      {
         double f = h[i][step] / d;
         for( size_t j = step; j < k; ++j )
            h[i][j] -= f * h[step][j];
      }
      for( size_t i = step + 1; i < k; ++i )
         h[step][i] = 0.0;
   }
   return true;
}

/** atom Hessian of a quadratic-shaped sum; nullopt unless every atom is a
 *  plain variable (otherwise a whole-expression gradient cut is unsound) */
std::optional<std::vector<std::vector<double>>>
quadraticHessian( const ExprDag& dag, int node )
{
   const ExprNode& n = dag.node( node );
   if( n.op != ExprOp::kSum )
      return std::nullopt;
   std::unordered_map<int, size_t> atomIdx;
   auto atomOf = [&]( int id ) -> std::optional<size_t> {
      if( !dag.node( id ).isVar() )
         return std::nullopt;
      return atomIdx.emplace( id, atomIdx.size() ).first->second;
   };
   struct Entry
   {
      size_t i, j;
      double v;
   };
   std::vector<Entry> entries;
   for( size_t k = 0; k < n.children.size(); ++k )
   {
      const ExprNode& c = dag.node( n.children[k] );
      double coeff = n.coeffs[k];
      if( c.isVar() )
         continue;
      if( isSquareTerm( c ) )
      {
         auto a = atomOf( c.children[0] );
         if( !a )
            return std::nullopt;
         entries.push_back( { *a, *a, 2.0 * coeff } );
      }
      else if( isProductOfTwo( c ) )
      {
         auto a = atomOf( c.children[0] );
         auto b = atomOf( c.children[1] );
         if( !a || !b )
            return std::nullopt;
         entries.push_back( { *a, *b, coeff } );
         entries.push_back( { *b, *a, coeff } );
      }
      else
         return std::nullopt;
   }
   size_t k = atomIdx.size();
   std::vector<std::vector<double>> h( k, std::vector<double>( k, 0.0 ) );
   for( const Entry& e : entries )
      h[e.i][e.j] += e.v;
   return h;
}

AffineEstimator
sparsify( const DenseEst& dense, bool over )
{
   AffineEstimator est;
   est.over = over;
   est.constant = dense.c;
   for( size_t j = 0; j < dense.g.size(); ++j )
      if( dense.g[j] != 0.0 )
      {
         est.cols.push_back( static_cast<int>( j ) );
         est.vals.push_back( dense.g[j] );
      }
   return est;
}

} // namespace

std::optional<AffineEstimator>
estimateExpression( const ExprDag& dag, int node, const StructureTag& tag,
                    std::span<const Interval> box,
                    std::span<const double> refPoint, bool over )
{
   std::vector<Interval> fullBox = paddedBox( dag, box );
   size_t nvars = fullBox.size();
   EstContext ctx{ dag, fullBox, refPoint, nvars };

   std::optional<DenseEst> dense;
   switch( tag.kind )
   {
   case StructureKind::kLinear:
      dense = affineOf( dag, node, nvars );
      break;
   case StructureKind::kConvex:
      dense = over ? estimateNode( ctx, node, true )
                   : gradientCut( dag, node, fullBox, refPoint, nvars );
      break;
   case StructureKind::kConcave:
      dense = over ? gradientCut( dag, node, fullBox, refPoint, nvars )
                   : estimateNode( ctx, node, false );
      break;
   case StructureKind::kQuadratic:
   {
      auto hess = quadraticHessian( dag, node );
      bool gradSide = false;
      if( hess )
      {
         if( !over && isPsd( *hess ) )
            gradSide = true;
         else if( over )
         {
            auto neg = *hess;
            for( auto& row : neg )
               for( double& v : row )
                  v = -v;
            if( isPsd( neg ) )
               gradSide = true;
         }
      }
      dense = gradSide ? gradientCut( dag, node, fullBox, refPoint, nvars )
                       : estimateNode( ctx, node, over );
      break;
   }
   default:
      dense = estimateNode( ctx, node, over );
      break;
   }
   if( !dense )
      return std::nullopt;
   return sparsify( *dense, over );
}

std::vector<AffineEstimator>
mcCormickEstimators( const ExprDag& dag, int product,
                     std::span<const Interval> box )
{
   std::vector<AffineEstimator> result;
   const ExprNode& n = dag.node( product );
   if( n.op != ExprOp::kProduct || n.children.size() != 2 )
      return result;
   std::vector<Interval> fullBox = paddedBox( dag, box );
   size_t nvars = fullBox.size();
   auto u = affineOf( dag, n.children[0], nvars );
   auto v = affineOf( dag, n.children[1], nvars );
   if( !u || !v )
      return result;
   Interval iu = intervalEval( dag, n.children[0], fullBox );
   Interval iv = intervalEval( dag, n.children[1], fullBox );

   struct Piece
   {
      double ub, vb;
      bool over;
   };
   const Piece pieces[4] = { { iu.lo, iv.lo, false },
                             { iu.hi, iv.hi, false },
                             { iu.hi, iv.lo, true },
                             { iu.lo, iv.hi, true } };
   for( const Piece& piece : pieces )
   {
      if( piece.ub <= -infinity || piece.ub >= infinity ||
          piece.vb <= -infinity || piece.vb >= infinity )
         continue;
      DenseEst dense;
      dense.g.resize( nvars, 0.0 );
      for( size_t j = 0; j < nvars; ++j )
         dense.g[j] = piece.vb * u->g[j] + piece.ub * v->g[j];
      dense.c = piece.vb * u->c + piece.ub * v->c - piece.ub * piece.vb;
      if( !finiteEst( dense ) )
         continue;
      result.push_back( sparsify( dense, piece.over ) );
   }
   return result;
}

Cut
estimatorCut( const AffineEstimator& est, int slackVar,
              std::span<const double> lpPoint )
{
   Cut cut;
   std::vector<std::pair<int, double>> entries;
   double sign = est.over ? -1.0 : 1.0;
   for( size_t k = 0; k < est.cols.size(); ++k )
      entries.emplace_back( est.cols[k], sign * est.vals[k] );
   entries.emplace_back( slackVar, -sign );
   std::sort( entries.begin(), entries.end() );
   for( const auto& [col, val] : entries )
   {
      cut.cols.push_back( col );
      cut.vals.push_back( val );
   }
   cut.lhs = -infinity;
   cut.rhs = -sign * est.constant;

   double act = 0.0;
   double norm2 = 0.0;
   for( size_t k = 0; k < cut.cols.size(); ++k )
   {
      if( static_cast<size_t>( cut.cols[k] ) < lpPoint.size() )
         act += cut.vals[k] * lpPoint[cut.cols[k]];
      norm2 += cut.vals[k] * cut.vals[k];
   }
   double viol = std::max( 0.0, act - cut.rhs );
   cut.efficacy = viol / std::sqrt( norm2 );
   return cut;
}

std::vector<int>
selectCuts( const std::vector<Cut>& candidates, int maxCuts )
{
   std::vector<int> order( candidates.size() );
   for( size_t i = 0; i < order.size(); ++i )
      order[i] = static_cast<int>( i );
   std::stable_sort( order.begin(), order.end(), [&]( int a, int b ) {
      return candidates[a].efficacy > candidates[b].efficacy;
   } );

   auto norm = []( const Cut& c ) {
      double s = 0.0;
      for( double v : c.vals )
         s += v * v;
      return std::sqrt( s );
   };
   auto cosine = [&]( const Cut& a, const Cut& b ) {
      double dot = 0.0;
      size_t i = 0, j = 0;
      while( i < a.cols.size() && j < b.cols.size() )
      {
         if( a.cols[i] < b.cols[j] )
            ++i;
         else if( a.cols[i] > b.cols[j] )
            ++j;
         else
            dot += a.vals[i++] * b.vals[j++];
      }
      double na = norm( a );
      double nb = norm( b );
      if( na <= 0.0 || nb <= 0.0 )
         return 1.0;
      // signed: an under/over pair points in opposite directions and both
      // may be kept
      return dot / ( na * nb );
   };

   std::vector<int> picked;
   for( int idx : order )
   {
      if( static_cast<int>( picked.size() ) >= maxCuts )
         break;
      bool parallel = false;
      for( int sel : picked )
         if( cosine( candidates[idx], candidates[sel] ) > 0.9 )
         {
            parallel = true;
            break;
         }
      if( !parallel )
         picked.push_back( idx );
   }
   return picked;
}

} // namespace minicip
