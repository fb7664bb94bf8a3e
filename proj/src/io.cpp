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

#include "minicip/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace minicip
{

std::string
formatNumber( double v )
{
   if( std::isnan( v ) )
      return "nan";
   if( std::isinf( v ) )
      return v > 0 ? "inf" : "-inf";
   if( v == 0.0 )
      v = 0.0;
   char buf[40];
   auto res = std::to_chars( buf, buf + sizeof( buf ), v );
   return std::string( buf, res.ptr );
}

std::string
formatNumberFull( double v )
{
   if( std::isnan( v ) )
      return "nan";
   if( std::isinf( v ) )
      return v > 0 ? "inf" : "-inf";
   if( v == 0.0 )
      v = 0.0;
   char buf[40];
   auto res = std::to_chars( buf, buf + sizeof( buf ), v,
                             std::chars_format::general, 17 );
   return std::string( buf, res.ptr );
}

namespace
{

std::vector<std::string>
splitLines( const std::string& text )
{
   std::vector<std::string> lines;
   std::string cur;
   for( char c : text )
   {
      if( c == '\n' )
      {
         lines.push_back( cur );
         cur.clear();
      }
      else if( c != '\r' )
         cur += c;
   }
   if( !cur.empty() )
      lines.push_back( cur );
   return lines;
}

std::string
stripComment( const std::string& line )
{
   size_t pos = line.find( '#' );
   return pos == std::string::npos ? line : line.substr( 0, pos );
}

std::string
trim( const std::string& s )
{
   size_t b = s.find_first_not_of( " \t" );
   if( b == std::string::npos )
      return "";
   size_t e = s.find_last_not_of( " \t" );
   return s.substr( b, e - b + 1 );
}

std::vector<std::string>
tokenize( const std::string& line )
{
   std::vector<std::string> tokens;
   std::istringstream in( line );
   std::string tok;
   while( in >> tok )
      tokens.push_back( tok );
   return tokens;
}

bool
parseNumToken( const std::string& tok, double& out )
{
   if( tok == "inf" || tok == "+inf" )
   {
      out = infinity;
      return true;
   }
   if( tok == "-inf" )
   {
      out = -infinity;
      return true;
   }
   const char* b = tok.data();
   const char* e = tok.data() + tok.size();
   auto res = std::from_chars( b, e, out );
   return res.ec == std::errc() && res.ptr == e;
}

bool
isIdentifier( const std::string& s )
{
   if( s.empty() )
      return false;
   if( !std::isalpha( static_cast<unsigned char>( s[0] ) ) && s[0] != '_' )
      return false;
   for( char c : s )
      if( !std::isalnum( static_cast<unsigned char>( c ) ) && c != '_' )
         return false;
   return true;
}

struct RowSides
{
   std::string body;
   double lhs;
   double rhs;
};

/// splits "expr <= 5", "expr >= 1", "expr == 2" or "0 <= expr <= 5"
RowSides
parseRowSides( const std::string& where, int lineno, const std::string& text )
{
   struct Rel
   {
      size_t pos;
      int kind; // 0 <=, 1 >=, 2 ==
   };
   std::vector<Rel> rels;
   for( size_t i = 0; i + 1 < text.size(); ++i )
   {
      if( text[i + 1] != '=' )
         continue;
      if( text[i] == '<' )
         rels.push_back( { i, 0 } );
      else if( text[i] == '>' )
         rels.push_back( { i, 1 } );
      else if( text[i] == '=' && ( i == 0 || ( text[i - 1] != '<' &&
                                               text[i - 1] != '>' &&
                                               text[i - 1] != '=' ) ) )
         rels.push_back( { i, 2 } );
   }

   auto num = [&]( const std::string& part ) {
      double v;
      if( !parseNumToken( trim( part ), v ) )
         throw IoError( where, lineno, "expected a number beside a relation" );
      return v;
   };

   if( rels.size() == 1 )
   {
      std::string left = text.substr( 0, rels[0].pos );
      std::string right = text.substr( rels[0].pos + 2 );
      RowSides r{ trim( left ), -infinity, infinity };
      double v = num( right );
      if( rels[0].kind == 0 )
         r.rhs = v;
      else if( rels[0].kind == 1 )
         r.lhs = v;
      else
      {
         r.lhs = v;
         r.rhs = v;
      }
      return r;
   }
   if( rels.size() == 2 && rels[0].kind == 0 && rels[1].kind == 0 )
   {
      RowSides r;
      r.lhs = num( text.substr( 0, rels[0].pos ) );
      r.body = trim( text.substr( rels[0].pos + 2,
                                  rels[1].pos - rels[0].pos - 2 ) );
      r.rhs = num( text.substr( rels[1].pos + 2 ) );
      if( r.lhs > r.rhs )
         throw IoError( where, lineno, "row sides are crossed" );
      return r;
   }
   throw IoError( where, lineno, "expected one relation or a ranged row" );
}

std::string
readFile( const std::string& path )
{
   std::ifstream in( path, std::ios::binary );
   if( !in )
      throw IoError( path, 0, "cannot open file" );
   std::ostringstream buf;
   buf << in.rdbuf();
   return buf.str();
}

void
writeFile( const std::string& path, const std::string& content )
{
   std::ofstream out( path, std::ios::binary );
   if( !out )
      throw IoError( path, 0, "cannot open file for writing" );
   out << content;
   if( !out )
      throw IoError( path, 0, "write failed" );
}

std::string
affineText( const std::vector<int>& cols, const std::vector<double>& vals,
            double offset, const std::vector<std::string>& names )
{
   // route through the expression printer so the text reparses canonically
   ExprDag scratch;
   std::vector<int> children;
   for( int c : cols )
      children.push_back( scratch.makeVariable( c ) );
   int root = scratch.makeSum( children, vals, offset );
   return printExpression( scratch, root, names );
}

std::string
sidesText( const std::string& body, double lhs, double rhs )
{
   if( lhs == rhs )
      return body + " == " + formatNumber( rhs );
   if( lhs == -infinity )
      return body + " <= " + formatNumber( rhs );
   if( rhs == infinity )
      return body + " >= " + formatNumber( lhs );
   return formatNumber( lhs ) + " <= " + body + " <= " + formatNumber( rhs );
}

} // namespace

Instance
readInstanceText( const std::string& text, const std::string& where )
{
   Instance inst;
   inst.name = "instance";
   std::vector<std::string> lines = splitLines( text );
   std::map<std::string, int> varIndex;

   enum Section
   {
      kNone,
      kVars,
      kObj,
      kLinear,
      kNonlinear
   };
   Section section = kNone;
   bool sawVars = false, sawObj = false;
   std::set<std::string> rowNames;

   for( size_t li = 0; li < lines.size(); ++li )
   {
      int lineno = static_cast<int>( li ) + 1;
      std::string line = trim( stripComment( lines[li] ) );
      if( line.empty() )
         continue;

      if( line == "[VARS]" || line == "[OBJ]" || line == "[LINEAR]" ||
          line == "[NONLINEAR]" )
      {
         Section next = line == "[VARS]"     ? kVars
                        : line == "[OBJ]"    ? kObj
                        : line == "[LINEAR]" ? kLinear
                                             : kNonlinear;
         if( next <= section )
            throw IoError( where, lineno, "section out of order" );
         section = next;
         sawVars |= next == kVars;
         continue;
      }

      switch( section )
      {
      case kNone:
      {
         std::vector<std::string> tokens = tokenize( line );
         if( tokens.size() == 2 && tokens[0] == "NAME" )
            inst.name = tokens[1];
         else
            throw IoError( where, lineno, "expected NAME or [VARS]" );
         break;
      }
      case kVars:
      {
         std::vector<std::string> tokens = tokenize( line );
         Variable var;
         if( tokens.size() == 2 && tokens[1] == "binary" )
         {
            var.name = tokens[0];
            var.lo = 0.0;
            var.hi = 1.0;
            var.integral = true;
         }
         else if( tokens.size() == 4 )
         {
            var.name = tokens[0];
            if( !parseNumToken( tokens[1], var.lo ) ||
                !parseNumToken( tokens[2], var.hi ) )
               throw IoError( where, lineno, "malformed variable bounds" );
            if( tokens[3] == "continuous" )
               var.integral = false;
            else if( tokens[3] == "integer" || tokens[3] == "binary" )
               var.integral = true;
            else
               throw IoError( where, lineno,
                              "unknown variable type '" + tokens[3] + "'" );
         }
         else
            throw IoError( where, lineno,
                           "expected 'name lo hi type' or 'name binary'" );
         if( !isIdentifier( var.name ) )
            throw IoError( where, lineno, "invalid variable name" );
         if( varIndex.count( var.name ) )
            throw IoError( where, lineno,
                           "duplicate variable name '" + var.name + "'" );
         if( std::isnan( var.lo ) || std::isnan( var.hi ) ||
             var.lo > var.hi )
            throw IoError( where, lineno, "crossed variable bounds" );
         varIndex[var.name] = inst.numVars();
         inst.vars.push_back( var );
         break;
      }
      case kObj:
      {
         if( sawObj )
            throw IoError( where, lineno, "second objective line" );
         if( line.substr( 0, 3 ) != "min" ||
             ( line.size() > 3 && !std::isspace(
                   static_cast<unsigned char>( line[3] ) ) ) )
            throw IoError( where, lineno, "objective must start with 'min'" );
         std::string body = trim( line.substr( 3 ) );
         if( body.empty() )
            throw IoError( where, lineno, "empty objective" );
         ExprDag scratch;
         int root;
         try
         {
            root = parseExpression( scratch, body, varIndex );
         }
         catch( const ExprParseError& e )
         {
            throw IoError( where, lineno, e.what() );
         }
         auto affine = extractAffine( scratch, root, inst.numVars() );
         if( !affine )
            throw IoError( where, lineno, "objective must be linear" );
         inst.obj = affine->first;
         inst.objOffset = affine->second;
         sawObj = true;
         break;
      }
      case kLinear:
      case kNonlinear:
      {
         size_t colon = line.find( ':' );
         if( colon == std::string::npos )
            throw IoError( where, lineno, "expected 'name: expression'" );
         std::string rname = trim( line.substr( 0, colon ) );
         if( !isIdentifier( rname ) )
            throw IoError( where, lineno, "invalid row name" );
         if( !rowNames.insert( rname ).second )
            throw IoError( where, lineno,
                           "duplicate row name '" + rname + "'" );
         RowSides sides =
             parseRowSides( where, lineno, trim( line.substr( colon + 1 ) ) );
         if( sides.body.empty() )
            throw IoError( where, lineno, "empty row expression" );

         if( section == kLinear )
         {
            ExprDag scratch;
            int root;
            try
            {
               root = parseExpression( scratch, sides.body, varIndex );
            }
            catch( const ExprParseError& e )
            {
               throw IoError( where, lineno, e.what() );
            }
            auto affine = extractAffine( scratch, root, inst.numVars() );
            if( !affine )
               throw IoError( where, lineno,
                              "linear row with nonlinear expression" );
            LinearRow row;
            row.name = rname;
            for( int j = 0; j < inst.numVars(); ++j )
            {
               if( affine->first[j] != 0.0 )
               {
                  row.cols.push_back( j );
                  row.vals.push_back( affine->first[j] );
               }
            }
            double c0 = affine->second;
            row.lhs = sides.lhs == -infinity ? -infinity : sides.lhs - c0;
            row.rhs = sides.rhs == infinity ? infinity : sides.rhs - c0;
            inst.linRows.push_back( row );
         }
         else
         {
            NonlinearRow row;
            row.name = rname;
            try
            {
               row.root = parseExpression( inst.dag, sides.body, varIndex );
            }
            catch( const ExprParseError& e )
            {
               throw IoError( where, lineno, e.what() );
            }
            row.lhs = sides.lhs;
            row.rhs = sides.rhs;
            inst.nlRows.push_back( row );
         }
         break;
      }
      }
   }

   if( !sawVars )
      throw IoError( where, 0, "missing [VARS] section" );
   if( !sawObj )
      throw IoError( where, 0, "missing [OBJ] section" );
   if( inst.obj.empty() )
      inst.obj.assign( inst.vars.size(), 0.0 );

   std::vector<std::string> errors = inst.validate();
   if( !errors.empty() )
      throw IoError( where, 0, errors.front() );
   return inst;
}

Instance
readInstance( const std::string& path )
{
   return readInstanceText( readFile( path ), path );
}

std::string
writeInstanceText( const Instance& inst )
{
   std::vector<std::string> names = inst.varNames();
   std::string out = "NAME " + inst.name + "\n[VARS]\n";
   for( const Variable& v : inst.vars )
   {
      out += v.name + " " + formatNumber( v.lo ) + " " +
             formatNumber( v.hi ) + " ";
      out += v.isBinary() ? "binary" : v.integral ? "integer" : "continuous";
      out += '\n';
   }

   out += "[OBJ]\n";
   std::vector<int> objCols;
   std::vector<double> objVals;
   for( int j = 0; j < inst.numVars(); ++j )
   {
      if( inst.obj[j] != 0.0 )
      {
         objCols.push_back( j );
         objVals.push_back( inst.obj[j] );
      }
   }
   out += "min " + affineText( objCols, objVals, inst.objOffset, names ) +
          "\n";

   if( !inst.linRows.empty() )
   {
      out += "[LINEAR]\n";
      for( const LinearRow& row : inst.linRows )
         out += row.name + ": " +
                sidesText( affineText( row.cols, row.vals, 0.0, names ),
                           row.lhs, row.rhs ) +
                "\n";
   }
   if( !inst.nlRows.empty() )
   {
      out += "[NONLINEAR]\n";
      for( const NonlinearRow& row : inst.nlRows )
         out += row.name + ": " +
                sidesText( printExpression( inst.dag, row.root, names ),
                           row.lhs, row.rhs ) +
                "\n";
   }
   return out;
}

void
writeInstance( const std::string& path, const Instance& inst )
{
   writeFile( path, writeInstanceText( inst ) );
}

Solution
readSolutionText( const std::string& text, const Instance& inst,
                  const std::string& where )
{
   Solution sol;
   std::vector<std::string> lines = splitLines( text );
   bool sawStatus = false;
   std::vector<char> assigned( inst.vars.size(), 0 );
   std::vector<double> values( inst.vars.size(), 0.0 );
   int nassigned = 0;

   for( size_t li = 0; li < lines.size(); ++li )
   {
      int lineno = static_cast<int>( li ) + 1;
      std::string line = trim( stripComment( lines[li] ) );
      if( line.empty() )
         continue;

      size_t eq = line.find( '=' );
      if( eq == std::string::npos )
      {
         std::vector<std::string> tokens = tokenize( line );
         if( tokens.size() == 2 && tokens[0] == "status" )
         {
            if( sawStatus )
               throw IoError( where, lineno, "second status line" );
            sol.status = tokens[1];
            sawStatus = true;
            continue;
         }
         throw IoError( where, lineno, "expected 'status s' or 'name=value'" );
      }

      std::string name = trim( line.substr( 0, eq ) );
      int j = inst.varIndex( name );
      if( j < 0 )
         throw IoError( where, lineno,
                        "unknown variable '" + name + "'" );
      if( assigned[j] )
         throw IoError( where, lineno, "variable '" + name +
                                           "' assigned twice" );
      double v;
      if( !parseNumToken( trim( line.substr( eq + 1 ) ), v ) )
         throw IoError( where, lineno, "malformed value" );
      assigned[j] = 1;
      values[static_cast<size_t>( j )] = v;
      ++nassigned;
   }

   if( !sawStatus )
      throw IoError( where, 0, "missing status line" );
   if( nassigned == 0 )
      return sol;
   if( nassigned != inst.numVars() )
      throw IoError( where, 0, "incomplete solution" );
   sol.x = values;
   return sol;
}

Solution
readSolution( const std::string& path, const Instance& inst )
{
   return readSolutionText( readFile( path ), inst, path );
}

std::string
writeSolutionText( const Instance& inst, const Solution& sol )
{
   std::string out = "status " + sol.status + "\n";
   if( !sol.x.empty() )
   {
      for( int j = 0; j < inst.numVars(); ++j )
         out += inst.vars[j].name + "=" + formatNumberFull( sol.x[j] ) + "\n";
   }
   return out;
}

void
writeSolution( const std::string& path, const Instance& inst,
               const Solution& sol )
{
   writeFile( path, writeSolutionText( inst, sol ) );
}

/*
 * restricted MPS reader
 */

Instance
readMpsText( const std::string& text, const std::string& where )
{
   Instance inst;
   inst.name = "instance";
   std::vector<std::string> lines = splitLines( text );

   enum Section
   {
      kBefore,
      kRows,
      kColumns,
      kRhs,
      kRanges,
      kBounds,
      kDone
   };
   Section section = kBefore;

   struct MpsRow
   {
      char sense;
      double b = 0.0;
      bool hasRange = false;
      double range = 0.0;
   };
   std::map<std::string, int> rowIndex; // into rowData
   std::vector<MpsRow> rowData;
   std::vector<std::string> rowOrder;
   std::string objRow;
   std::map<std::string, int> colIndex;
   std::vector<double> objCoef;
   // entries[row][col] accumulated in appearance order per row
   std::vector<std::vector<std::pair<int, double>>> entries;
   bool inIntegerBlock = false;
   std::vector<char> setLower; // explicit LO/FX/MI seen per column

   auto getCol = [&]( const std::string& name ) {
      auto it = colIndex.find( name );
      if( it != colIndex.end() )
         return it->second;
      int j = inst.numVars();
      colIndex[name] = j;
      Variable var;
      var.name = name;
      var.lo = 0.0;
      var.hi = infinity;
      var.integral = inIntegerBlock;
      inst.vars.push_back( var );
      objCoef.push_back( 0.0 );
      setLower.push_back( 0 );
      return j;
   };

   for( size_t li = 0; li < lines.size(); ++li )
   {
      int lineno = static_cast<int>( li ) + 1;
      const std::string& raw = lines[li];
      if( raw.empty() || raw[0] == '*' )
         continue;
      std::vector<std::string> tokens = tokenize( raw );
      if( tokens.empty() )
         continue;

      bool header = !std::isspace( static_cast<unsigned char>( raw[0] ) );
      if( header )
      {
         const std::string& kw = tokens[0];
         if( kw == "NAME" )
         {
            if( tokens.size() >= 2 )
               inst.name = tokens[1];
            continue;
         }
         if( kw == "ROWS" )
            section = kRows;
         else if( kw == "COLUMNS" )
            section = kColumns;
         else if( kw == "RHS" )
            section = kRhs;
         else if( kw == "RANGES" )
            section = kRanges;
         else if( kw == "BOUNDS" )
            section = kBounds;
         else if( kw == "ENDATA" )
            section = kDone;
         else
            throw IoError( where, lineno,
                           "unsupported MPS section '" + kw + "'" );
         continue;
      }

      switch( section )
      {
      case kRows:
      {
         if( tokens.size() != 2 || tokens[0].size() != 1 )
            throw IoError( where, lineno, "malformed ROWS line" );
         char sense = tokens[0][0];
         if( sense == 'N' )
         {
            if( !objRow.empty() )
               throw IoError( where, lineno, "second objective row" );
            objRow = tokens[1];
            continue;
         }
         if( sense != 'L' && sense != 'G' && sense != 'E' )
            throw IoError( where, lineno, "unknown row sense" );
         if( rowIndex.count( tokens[1] ) )
            throw IoError( where, lineno, "duplicate row name" );
         rowIndex[tokens[1]] = static_cast<int>( rowData.size() );
         rowData.push_back( { sense, 0.0, false, 0.0 } );
         rowOrder.push_back( tokens[1] );
         entries.emplace_back();
         break;
      }
      case kColumns:
      {
         if( std::find( tokens.begin(), tokens.end(), "'MARKER'" ) !=
             tokens.end() )
         {
            if( std::find( tokens.begin(), tokens.end(), "'INTORG'" ) !=
                tokens.end() )
               inIntegerBlock = true;
            else if( std::find( tokens.begin(), tokens.end(), "'INTEND'" ) !=
                     tokens.end() )
               inIntegerBlock = false;
            else
               throw IoError( where, lineno, "unknown marker" );
            continue;
         }
         if( tokens.size() < 3 || tokens.size() % 2 == 0 )
            throw IoError( where, lineno, "malformed COLUMNS line" );
         int j = getCol( tokens[0] );
         for( size_t t = 1; t + 1 < tokens.size(); t += 2 )
         {
            double v;
            if( !parseNumToken( tokens[t + 1], v ) )
               throw IoError( where, lineno, "malformed coefficient" );
            if( tokens[t] == objRow )
            {
               objCoef[static_cast<size_t>( j )] += v;
               continue;
            }
            auto it = rowIndex.find( tokens[t] );
            if( it == rowIndex.end() )
               throw IoError( where, lineno,
                              "unknown row '" + tokens[t] + "'" );
            entries[static_cast<size_t>( it->second )].push_back( { j, v } );
         }
         break;
      }
      case kRhs:
      {
         if( tokens.size() < 3 || tokens.size() % 2 == 0 )
            throw IoError( where, lineno, "malformed RHS line" );
         for( size_t t = 1; t + 1 < tokens.size(); t += 2 )
         {
            double v;
            if( !parseNumToken( tokens[t + 1], v ) )
               throw IoError( where, lineno, "malformed RHS value" );
            if( tokens[t] == objRow )
            {
               inst.objOffset = -v;
               continue;
            }
            auto it = rowIndex.find( tokens[t] );
            if( it == rowIndex.end() )
               throw IoError( where, lineno,
                              "unknown row '" + tokens[t] + "'" );
            rowData[static_cast<size_t>( it->second )].b = v;
         }
         break;
      }
      case kRanges:
      {
         if( tokens.size() < 3 || tokens.size() % 2 == 0 )
            throw IoError( where, lineno, "malformed RANGES line" );
         for( size_t t = 1; t + 1 < tokens.size(); t += 2 )
         {
            double v;
            if( !parseNumToken( tokens[t + 1], v ) )
               throw IoError( where, lineno, "malformed range value" );
            auto it = rowIndex.find( tokens[t] );
            if( it == rowIndex.end() )
               throw IoError( where, lineno,
                              "unknown row '" + tokens[t] + "'" );
            rowData[static_cast<size_t>( it->second )].hasRange = true;
            rowData[static_cast<size_t>( it->second )].range = v;
         }
         break;
      }
      case kBounds:
      {
         if( tokens.size() < 3 )
            throw IoError( where, lineno, "malformed BOUNDS line" );
         const std::string& type = tokens[0];
         int j = getCol( tokens[2] );
         Variable& var = inst.vars[static_cast<size_t>( j )];
         double v = 0.0;
         bool needsValue = type == "UP" || type == "LO" || type == "FX" ||
                           type == "UI" || type == "LI";
         if( needsValue )
         {
            if( tokens.size() < 4 || !parseNumToken( tokens[3], v ) )
               throw IoError( where, lineno, "malformed bound value" );
         }
         if( type == "UP" )
            var.hi = v;
         else if( type == "LO" )
         {
            var.lo = v;
            setLower[static_cast<size_t>( j )] = 1;
         }
         else if( type == "FX" )
         {
            var.lo = var.hi = v;
            setLower[static_cast<size_t>( j )] = 1;
         }
         else if( type == "FR" )
         {
            var.lo = -infinity;
            var.hi = infinity;
            setLower[static_cast<size_t>( j )] = 1;
         }
         else if( type == "MI" )
         {
            var.lo = -infinity;
            setLower[static_cast<size_t>( j )] = 1;
         }
         else if( type == "PL" )
            var.hi = infinity;
         else if( type == "BV" )
         {
            var.lo = 0.0;
            var.hi = 1.0;
            var.integral = true;
            setLower[static_cast<size_t>( j )] = 1;
         }
         else if( type == "UI" )
         {
            var.hi = v;
            var.integral = true;
         }
         else if( type == "LI" )
         {
            var.lo = v;
            var.integral = true;
            setLower[static_cast<size_t>( j )] = 1;
         }
         else
            throw IoError( where, lineno,
                           "unknown bound type '" + type + "'" );
         break;
      }
      case kBefore:
      case kDone:
         throw IoError( where, lineno, "data outside of a section" );
      }
   }

   if( objRow.empty() )
      throw IoError( where, 0, "missing objective row" );

   // a negative upper bound without explicit lower bound opens the domain
   for( size_t j = 0; j < inst.vars.size(); ++j )
      if( !setLower[j] && inst.vars[j].hi < 0.0 )
         inst.vars[j].lo = -infinity;

   inst.obj = objCoef;
   for( size_t r = 0; r < rowData.size(); ++r )
   {
      LinearRow row;
      row.name = rowOrder[r];
      // merge duplicate entries for one column
      std::map<int, double> merged;
      for( auto& [col, v] : entries[r] )
         merged[col] += v;
      for( auto& [col, v] : merged )
      {
         if( v != 0.0 )
         {
            row.cols.push_back( col );
            row.vals.push_back( v );
         }
      }
      const MpsRow& mr = rowData[r];
      if( mr.sense == 'L' )
      {
         row.rhs = mr.b;
         if( mr.hasRange )
            row.lhs = mr.b - std::fabs( mr.range );
      }
      else if( mr.sense == 'G' )
      {
         row.lhs = mr.b;
         if( mr.hasRange )
            row.rhs = mr.b + std::fabs( mr.range );
      }
      else
      {
         row.lhs = row.rhs = mr.b;
         if( mr.hasRange )
         {
            if( mr.range >= 0.0 )
               row.rhs = mr.b + mr.range;
            else
               row.lhs = mr.b + mr.range;
         }
      }
      inst.linRows.push_back( row );
   }

   std::vector<std::string> errors = inst.validate();
   if( !errors.empty() )
      throw IoError( where, 0, errors.front() );
   return inst;
}

Instance
readMps( const std::string& path )
{
   return readMpsText( readFile( path ), path );
}

/*
 * symmetry file reader
 */

std::vector<Permutation>
readSymmetryText( const std::string& text, int n, const std::string& where )
{
   std::vector<Permutation> perms;
   std::vector<std::string> lines = splitLines( text );

   for( size_t li = 0; li < lines.size(); ++li )
   {
      int lineno = static_cast<int>( li ) + 1;
      std::string line = trim( stripComment( lines[li] ) );
      if( line.empty() )
         continue;

      Permutation perm;
      perm.image.resize( static_cast<size_t>( n ) );
      for( int j = 0; j < n; ++j )
         perm.image[j] = j;
      std::vector<char> used( static_cast<size_t>( n ), 0 );

      size_t pos = 0;
      bool sawCycle = false;
      while( pos < line.size() )
      {
         if( std::isspace( static_cast<unsigned char>( line[pos] ) ) )
         {
            ++pos;
            continue;
         }
         if( line[pos] != '(' )
            throw IoError( where, lineno, "expected '(' in cycle notation" );
         ++pos;
         std::vector<int> cycle;
         for( ;; )
         {
            while( pos < line.size() && std::isspace(
                       static_cast<unsigned char>( line[pos] ) ) )
               ++pos;
            if( pos < line.size() && line[pos] == ')' )
            {
               ++pos;
               break;
            }
            size_t start = pos;
            while( pos < line.size() && std::isdigit(
                       static_cast<unsigned char>( line[pos] ) ) )
               ++pos;
            if( pos == start )
               throw IoError( where, lineno, "expected index or ')'" );
            int idx = std::stoi( line.substr( start, pos - start ) );
            if( idx < 1 || idx > n )
               throw IoError( where, lineno, "index out of range" );
            if( used[static_cast<size_t>( idx - 1 )] )
               throw IoError( where, lineno, "index repeated in permutation" );
            used[static_cast<size_t>( idx - 1 )] = 1;
            cycle.push_back( idx - 1 );
         }
         if( cycle.size() < 2 )
            throw IoError( where, lineno, "cycle with fewer than 2 indices" );
         for( size_t t = 0; t < cycle.size(); ++t )
            perm.image[static_cast<size_t>( cycle[t] )] =
                cycle[( t + 1 ) % cycle.size()];
         sawCycle = true;
      }
      if( !sawCycle )
         throw IoError( where, lineno, "empty permutation line" );
      perms.push_back( std::move( perm ) );
   }
   return perms;
}

std::vector<Permutation>
readSymmetryFile( const std::string& path, int n )
{
   return readSymmetryText( readFile( path ), n, path );
}

/*
 * decomposition file reader
 */

Decomposition
readDecompositionText( const std::string& text, const Instance& inst,
                       const std::string& where )
{
   int numLin = static_cast<int>( inst.linRows.size() );
   int numRows = numLin + static_cast<int>( inst.nlRows.size() );

   auto rowByName = [&]( const std::string& name ) {
      for( int r = 0; r < numLin; ++r )
         if( inst.linRows[r].name == name )
            return r;
      for( size_t r = 0; r < inst.nlRows.size(); ++r )
         if( inst.nlRows[r].name == name )
            return numLin + static_cast<int>( r );
      return -1;
   };

   Decomposition dec;
   dec.rowLabel.assign( static_cast<size_t>( numRows ), kLinking );
   dec.colLabel.assign( static_cast<size_t>( inst.numVars() ), kLinking );

   std::vector<std::string> lines = splitLines( text );
   enum Mode
   {
      kExpectHeader,
      kInBlock,
      kInMaster,
      kInLinkingVars
   };
   Mode mode = kExpectHeader;
   int currentBlock = -1;
   std::vector<char> rowSeen( static_cast<size_t>( numRows ), 0 );
   std::vector<char> forcedLinkingCol( static_cast<size_t>( inst.numVars() ),
                                       0 );

   for( size_t li = 0; li < lines.size(); ++li )
   {
      int lineno = static_cast<int>( li ) + 1;
      std::string line = trim( stripComment( lines[li] ) );
      if( line.empty() )
         continue;
      std::vector<std::string> tokens = tokenize( line );

      if( tokens[0] == "NBLOCKS" )
      {
         if( mode != kExpectHeader || tokens.size() != 2 )
            throw IoError( where, lineno, "malformed NBLOCKS line" );
         try
         {
            dec.k = std::stoi( tokens[1] );
         }
         catch( ... )
         {
            throw IoError( where, lineno, "malformed block count" );
         }
         if( dec.k < 1 )
            throw IoError( where, lineno, "block count must be positive" );
         mode = kInMaster; // names before any BLOCK are linking rows
         continue;
      }
      if( mode == kExpectHeader )
         throw IoError( where, lineno, "expected NBLOCKS first" );

      if( tokens[0] == "BLOCK" )
      {
         if( tokens.size() != 2 )
            throw IoError( where, lineno, "malformed BLOCK line" );
         int q;
         try
         {
            q = std::stoi( tokens[1] );
         }
         catch( ... )
         {
            throw IoError( where, lineno, "malformed block number" );
         }
         if( q < 1 || q > dec.k )
            throw IoError( where, lineno, "block number out of range" );
         currentBlock = q - 1;
         mode = kInBlock;
         continue;
      }
      if( tokens[0] == "MASTERCONSS" )
      {
         mode = kInMaster;
         continue;
      }
      if( tokens[0] == "LINKINGVARS" )
      {
         mode = kInLinkingVars;
         continue;
      }

      for( const std::string& name : tokens )
      {
         if( mode == kInLinkingVars )
         {
            int j = inst.varIndex( name );
            if( j < 0 )
               throw IoError( where, lineno,
                              "unknown variable '" + name + "'" );
            forcedLinkingCol[static_cast<size_t>( j )] = 1;
            continue;
         }
         int r = rowByName( name );
         if( r < 0 )
            throw IoError( where, lineno, "unknown row '" + name + "'" );
         if( rowSeen[static_cast<size_t>( r )] )
            throw IoError( where, lineno,
                           "row '" + name + "' listed twice" );
         rowSeen[static_cast<size_t>( r )] = 1;
         dec.rowLabel[static_cast<size_t>( r )] =
             mode == kInBlock ? currentBlock : kLinking;
      }
   }

   if( dec.k == 0 )
      throw IoError( where, 0, "missing NBLOCKS" );

   // derive column labels: a column is in block q if every non-linking row
   // touching it is in block q
   for( int j = 0; j < inst.numVars(); ++j )
   {
      if( forcedLinkingCol[static_cast<size_t>( j )] )
         continue;
      int label = kLinking;
      bool conflict = false;
      auto touch = [&]( int r ) {
         int q = dec.rowLabel[static_cast<size_t>( r )];
         if( q == kLinking )
            return;
         if( label == kLinking )
            label = q;
         else if( label != q )
            conflict = true;
      };
      for( int r = 0; r < numLin; ++r )
         if( inst.linRows[r].coefficient( j ) != 0.0 )
            touch( r );
      for( size_t r = 0; r < inst.nlRows.size(); ++r )
      {
         const NonlinearRow& row = inst.nlRows[r];
         std::vector<char> mark = inst.dag.reachable( row.root );
         bool uses = false;
         for( int id = 0; id <= row.root && !uses; ++id )
            if( mark[id] && inst.dag.node( id ).isVar() &&
                inst.dag.node( id ).varIndex == j )
               uses = true;
         if( uses )
            touch( numLin + static_cast<int>( r ) );
      }
      if( !conflict )
         dec.colLabel[static_cast<size_t>( j )] = label;
   }

   return dec;
}

Decomposition
readDecomposition( const std::string& path, const Instance& inst )
{
   return readDecompositionText( readFile( path ), inst, path );
}

} // namespace minicip
