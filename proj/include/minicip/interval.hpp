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

#ifndef MINICIP_INTERVAL_HPP
#define MINICIP_INTERVAL_HPP

#include <algorithm>
#include <cmath>
#include <limits>

namespace minicip
{

constexpr double infinity = std::numeric_limits<double>::infinity();

/** Closed interval over the extended reals.
 *
 *  The empty interval is represented by lo > hi (canonically [+inf,-inf]).
 *  Arithmetic is outward-rounded by relative epsilon inflation, so results
 *  may overestimate the exact image but never underestimate it.
 */
struct Interval
{
   double lo;
   double hi;

   Interval() : lo( -infinity ), hi( infinity ) {}
   Interval( double l, double h ) : lo( l ), hi( h ) {}

   static Interval empty() { return Interval( infinity, -infinity ); }
   static Interval entire() { return Interval( -infinity, infinity ); }
   static Interval point( double v ) { return Interval( v, v ); }
   static Interval positive() { return Interval( 0.0, infinity ); }

   bool isEmpty() const { return !( lo <= hi ); }
   bool isPoint() const { return lo == hi; }
   bool isFinite() const { return std::isfinite( lo ) && std::isfinite( hi ); }

   bool contains( double v ) const { return lo <= v && v <= hi; }
   bool contains( const Interval& other ) const
   {
      return other.isEmpty() || ( lo <= other.lo && other.hi <= hi );
   }

   double width() const { return isEmpty() ? 0.0 : hi - lo; }

   /// midpoint clamped to a finite value; 0 for the entire interval
   double mid() const
   {
      if( isEmpty() )
         return 0.0;
      if( std::isinf( lo ) && std::isinf( hi ) )
         return 0.0;
      if( std::isinf( lo ) )
         return hi - 1.0;
      if( std::isinf( hi ) )
         return lo + 1.0;
      return 0.5 * ( lo + hi );
   }

   bool operator==( const Interval& other ) const
   {
      if( isEmpty() && other.isEmpty() )
         return true;
      return lo == other.lo && hi == other.hi;
   }
};

namespace detail
{
/// relative outward inflation factor applied after every arithmetic step
constexpr double inflationEps = 1e-12;

inline double
inflateDown( double v )
{
   if( !std::isfinite( v ) )
      return v;
   return v - inflationEps * std::fabs( v ) -
          std::numeric_limits<double>::denorm_min();
}

inline double
inflateUp( double v )
{
   if( !std::isfinite( v ) )
      return v;
   return v + inflationEps * std::fabs( v ) +
          std::numeric_limits<double>::denorm_min();
}

inline Interval
inflate( Interval x )
{
   if( x.isEmpty() )
      return x;
   return Interval( inflateDown( x.lo ), inflateUp( x.hi ) );
}

/// product that treats 0 * inf as 0, matching the image of x*y on boxes
inline double
safeMul( double a, double b )
{
   if( a == 0.0 || b == 0.0 )
      return 0.0;
   return a * b;
}

/// drop inflation spill below zero for maps whose exact image is nonnegative
inline Interval
clampNonneg( Interval x )
{
   if( !x.isEmpty() && x.lo < 0.0 )
      x.lo = 0.0;
   return x;
}
} // namespace detail

inline Interval
intersect( const Interval& a, const Interval& b )
{
   if( a.isEmpty() || b.isEmpty() )
      return Interval::empty();
   Interval r( std::max( a.lo, b.lo ), std::min( a.hi, b.hi ) );
   return r.isEmpty() ? Interval::empty() : r;
}

inline Interval
hull( const Interval& a, const Interval& b )
{
   if( a.isEmpty() )
      return b;
   if( b.isEmpty() )
      return a;
   return Interval( std::min( a.lo, b.lo ), std::max( a.hi, b.hi ) );
}

inline Interval
operator+( const Interval& a, const Interval& b )
{
   if( a.isEmpty() || b.isEmpty() )
      return Interval::empty();
   return detail::inflate( Interval( a.lo + b.lo, a.hi + b.hi ) );
}

inline Interval
operator-( const Interval& a )
{
   if( a.isEmpty() )
      return a;
   return Interval( -a.hi, -a.lo );
}

inline Interval
operator-( const Interval& a, const Interval& b )
{
   return a + ( -b );
}

inline Interval
operator*( const Interval& a, const Interval& b )
{
   if( a.isEmpty() || b.isEmpty() )
      return Interval::empty();
   using detail::safeMul;
   double p1 = safeMul( a.lo, b.lo );
   double p2 = safeMul( a.lo, b.hi );
   double p3 = safeMul( a.hi, b.lo );
   double p4 = safeMul( a.hi, b.hi );
   return detail::inflate( Interval( std::min( { p1, p2, p3, p4 } ),
                                     std::max( { p1, p2, p3, p4 } ) ) );
}

inline Interval
scale( const Interval& a, double c )
{
   if( a.isEmpty() )
      return a;
   if( c == 0.0 )
      return Interval::point( 0.0 );
   Interval r = c > 0 ? Interval( detail::safeMul( c, a.lo ),
                                  detail::safeMul( c, a.hi ) )
                      : Interval( detail::safeMul( c, a.hi ),
                                  detail::safeMul( c, a.lo ) );
   return detail::inflate( r );
}

/// image of 1/x; the hull is returned when x straddles zero
inline Interval
reciprocal( const Interval& x )
{
   if( x.isEmpty() )
      return x;
   if( x.lo > 0.0 || x.hi < 0.0 )
      return detail::inflate( Interval( 1.0 / x.hi, 1.0 / x.lo ) );
   if( x.lo == 0.0 && x.hi == 0.0 )
      return Interval::empty();
   if( x.lo == 0.0 )
      return detail::inflate( Interval( 1.0 / x.hi, infinity ) );
   if( x.hi == 0.0 )
      return detail::inflate( Interval( -infinity, 1.0 / x.lo ) );
   return Interval::entire();
}

inline Interval
expIv( const Interval& x )
{
   if( x.isEmpty() )
      return x;
   return detail::clampNonneg( detail::inflate(
       Interval( std::exp( x.lo ), std::exp( x.hi ) ) ) );
}

/// image of log over the part of x inside (0,inf); EMPTY if none
inline Interval
logIv( const Interval& x )
{
   if( x.isEmpty() || x.hi <= 0.0 )
      return Interval::empty();
   double lo = x.lo <= 0.0 ? -infinity : std::log( x.lo );
   return detail::inflate( Interval( lo, std::log( x.hi ) ) );
}

inline Interval
absIv( const Interval& x )
{
   if( x.isEmpty() )
      return x;
   if( x.lo >= 0.0 )
      return x;
   if( x.hi <= 0.0 )
      return -x;
   return Interval( 0.0, std::max( -x.lo, x.hi ) );
}

inline bool
isIntegralExponent( double p )
{
   return std::fabs( p ) < 1e15 && p == std::nearbyint( p );
}

/// image of x^p; for fractional p the domain is restricted to x >= 0
inline Interval
powIv( const Interval& x, double p )
{
   if( x.isEmpty() )
      return x;
   if( p == 0.0 )
      return Interval::point( 1.0 );
   if( p == 1.0 )
      return x;

   if( isIntegralExponent( p ) )
   {
      long long n = static_cast<long long>( p );
      if( n < 0 )
      {
         Interval r = reciprocal( powIv( x, static_cast<double>( -n ) ) );
         return n % 2 == 0 ? detail::clampNonneg( r ) : r;
      }
      if( n % 2 == 0 )
      {
         double m = x.contains( 0.0 )
                        ? 0.0
                        : std::min( std::fabs( x.lo ), std::fabs( x.hi ) );
         double M = std::max( std::fabs( x.lo ), std::fabs( x.hi ) );
         return detail::clampNonneg( detail::inflate(
             Interval( std::pow( m, p ), std::pow( M, p ) ) ) );
      }
      return detail::inflate(
          Interval( std::pow( x.lo, p ), std::pow( x.hi, p ) ) );
   }

   Interval xp = intersect( x, Interval( 0.0, infinity ) );
   if( xp.isEmpty() )
      return Interval::empty();
   if( p > 0.0 )
      return detail::clampNonneg( detail::inflate(
          Interval( std::pow( xp.lo, p ), std::pow( xp.hi, p ) ) ) );
   // decreasing on (0,inf); 0^p -> +inf
   double hi = xp.lo == 0.0 ? infinity : std::pow( xp.lo, p );
   double lo = std::isinf( xp.hi ) ? 0.0 : std::pow( xp.hi, p );
   return detail::clampNonneg( detail::inflate( Interval( lo, hi ) ) );
}

} // namespace minicip

#endif
