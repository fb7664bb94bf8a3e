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

#include "minicip/report.hpp"

#include "minicip/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace minicip
{

namespace
{

std::vector<std::string>
splitTokens( const std::string& line )
{
   std::vector<std::string> tokens;
   std::istringstream in( line );
   std::string tok;
   while( in >> tok )
      tokens.push_back( tok );
   return tokens;
}

double
parseDouble( const std::string& tok, const std::string& where, int line,
             const char* what )
{
   try
   {
      std::size_t used = 0;
      double v = std::stod( tok, &used );
      if( used != tok.size() )
         throw std::invalid_argument( tok );
      return v;
   }
   catch( const std::exception& )
   {
      throw IoError( where, line,
                     std::string( "bad " ) + what + " value '" + tok + "'" );
   }
}

long
parseLong( const std::string& tok, const std::string& where, int line,
           const char* what )
{
   try
   {
      std::size_t used = 0;
      long v = std::stol( tok, &used );
      if( used != tok.size() )
         throw std::invalid_argument( tok );
      return v;
   }
   catch( const std::exception& )
   {
      throw IoError( where, line,
                     std::string( "bad " ) + what + " value '" + tok + "'" );
   }
}

bool
isSolved( const RunRecord& record )
{
   return record.status == "optimal" || record.status == "infeasible";
}

double
countedTime( const RunRecord& record, double timeLimit )
{
   return isSolved( record ) ? record.time : timeLimit;
}

/// a subset token parsed into one of the membership rules
struct SubsetRule
{
   enum class Kind
   {
      kAll,
      kAffected,
      kBracket,
      kBothSolved,
      kDiffTimeouts
   };

   Kind kind = Kind::kAll;
   double minTime = 0.0;
   std::string label;
};

SubsetRule
parseSubsetToken( const std::string& token, std::size_t numConfigs )
{
   SubsetRule rule;
   if( token == "all" )
   {
      rule.kind = SubsetRule::Kind::kAll;
      rule.label = "all";
      return rule;
   }
   if( token == "affected" || token == "both-solved" ||
       token == "diff-timeouts" )
   {
      if( numConfigs != 2 )
         throw std::invalid_argument( "subset '" + token +
                                      "' needs two configurations" );
      rule.kind = token == "affected" ? SubsetRule::Kind::kAffected
                  : token == "both-solved" ? SubsetRule::Kind::kBothSolved
                                           : SubsetRule::Kind::kDiffTimeouts;
      rule.label = token;
      return rule;
   }
   try
   {
      std::size_t used = 0;
      double t = std::stod( token, &used );
      if( used != token.size() || t < 0.0 )
         throw std::invalid_argument( token );
      rule.kind = SubsetRule::Kind::kBracket;
      rule.minTime = t;
      rule.label = "[" + formatNumber( t ) + ",tilim]";
      return rule;
   }
   catch( const std::exception& )
   {
      throw std::invalid_argument( "unknown subset token '" + token + "'" );
   }
}

/// true iff instance i belongs to the subset described by rule
bool
inSubset( const SubsetRule& rule,
          const std::vector<std::vector<RunRecord>>& configs, std::size_t i,
          double timeLimit )
{
   switch( rule.kind )
   {
   case SubsetRule::Kind::kAll:
      return true;
   case SubsetRule::Kind::kAffected:
      return configs[0][i].iters != configs[1][i].iters;
   case SubsetRule::Kind::kBracket:
   {
      bool anySolved = false;
      bool anySlow = false;
      for( const auto& config : configs )
      {
         anySolved = anySolved || isSolved( config[i] );
         anySlow =
             anySlow || countedTime( config[i], timeLimit ) >= rule.minTime;
      }
      return anySolved && anySlow;
   }
   case SubsetRule::Kind::kBothSolved:
      return isSolved( configs[0][i] ) && isSolved( configs[1][i] );
   case SubsetRule::Kind::kDiffTimeouts:
      return isSolved( configs[0][i] ) != isSolved( configs[1][i] );
   }
   return false;
}

struct ConfigAggregate
{
   long solved = 0;
   double timeSgm = 0.0;
   double nodeSgm = 0.0;
};

ConfigAggregate
aggregateSubset( const std::vector<RunRecord>& config,
                 const std::vector<std::size_t>& members, double timeLimit )
{
   ConfigAggregate agg;
   std::vector<double> times;
   std::vector<double> nodes;
   for( std::size_t i : members )
   {
      const RunRecord& record = config[i];
      if( isSolved( record ) )
         ++agg.solved;
      times.push_back( countedTime( record, timeLimit ) );
      nodes.push_back( double( record.nodes ) );
   }
   agg.timeSgm = shiftedGeometricMean( times, 1.0 );
   agg.nodeSgm = shiftedGeometricMean( nodes, 100.0 );
   return agg;
}

void
appendCell( std::string& out, const char* format, double value )
{
   char buf[64];
   std::snprintf( buf, sizeof( buf ), format, value );
   out += buf;
}

void
appendCell( std::string& out, const char* format, long value )
{
   char buf[64];
   std::snprintf( buf, sizeof( buf ), format, value );
   out += buf;
}

void
appendCell( std::string& out, const char* format, const char* value )
{
   char buf[64];
   std::snprintf( buf, sizeof( buf ), format, value );
   out += buf;
}

} // namespace

std::vector<RunRecord>
parseRunText( const std::string& text, const std::string& where )
{
   std::vector<RunRecord> records;
   std::istringstream in( text );
   std::string line;
   int lineNo = 0;
   while( std::getline( in, line ) )
   {
      ++lineNo;
      if( std::size_t hash = line.find( '#' ); hash != std::string::npos )
         line.erase( hash );
      std::vector<std::string> tokens = splitTokens( line );
      if( tokens.empty() )
         continue;
      if( tokens.size() != 7 )
         throw IoError( where, lineNo,
                        "expected 7 fields "
                        "(name status time nodes iters primal dual), got " +
                            std::to_string( tokens.size() ) );
      RunRecord record;
      record.name = tokens[0];
      record.status = tokens[1];
      record.time = parseDouble( tokens[2], where, lineNo, "time" );
      record.nodes = parseLong( tokens[3], where, lineNo, "nodes" );
      record.iters = parseLong( tokens[4], where, lineNo, "iters" );
      record.primal = parseDouble( tokens[5], where, lineNo, "primal" );
      record.dual = parseDouble( tokens[6], where, lineNo, "dual" );
      if( record.time < 0.0 )
         throw IoError( where, lineNo, "negative time" );
      records.push_back( std::move( record ) );
   }
   return records;
}

std::vector<RunRecord>
readRunFile( const std::string& path )
{
   namespace fs = std::filesystem;
   std::vector<fs::path> files;
   if( fs::is_directory( path ) )
   {
      for( const auto& entry : fs::directory_iterator( path ) )
         if( entry.is_regular_file() && entry.path().extension() == ".run" )
            files.push_back( entry.path() );
      if( files.empty() )
         throw IoError( path, 0, "directory contains no .run files" );
      std::sort( files.begin(), files.end() );
   }
   else
      files.emplace_back( path );

   std::vector<RunRecord> records;
   for( const fs::path& file : files )
   {
      std::ifstream in( file );
      if( !in )
         throw IoError( file.string(), 0, "cannot open file" );
      std::stringstream buffer;
      buffer << in.rdbuf();
      std::vector<RunRecord> part = parseRunText( buffer.str(), file.string() );
      records.insert( records.end(), std::make_move_iterator( part.begin() ),
                      std::make_move_iterator( part.end() ) );
   }
   return records;
}

std::string
formatRunRecord( const RunRecord& record )
{
   std::string out = record.name;
   out += ' ';
   out += record.status;
   out += ' ';
   out += formatNumber( record.time );
   out += ' ';
   out += std::to_string( record.nodes );
   out += ' ';
   out += std::to_string( record.iters );
   out += ' ';
   out += formatNumber( record.primal );
   out += ' ';
   out += formatNumber( record.dual );
   return out;
}

double
shiftedGeometricMean( std::span<const double> values, double shift )
{
   if( values.empty() )
      throw std::invalid_argument(
          "shifted geometric mean of an empty sequence" );
   double logSum = 0.0;
   for( double v : values )
   {
      double shifted = v + shift;
      if( shifted <= 0.0 )
         throw std::invalid_argument(
             "shifted geometric mean needs positive shifted values" );
      logSum += std::log( shifted );
   }
   return std::exp( logSum / double( values.size() ) ) - shift;
}

std::string
aggregateRuns( const std::vector<std::vector<RunRecord>>& configs,
               const ReportOptions& options )
{
   if( configs.empty() || configs.size() > 2 )
      throw std::invalid_argument( "report needs one or two configurations" );

   std::vector<std::vector<RunRecord>> sorted = configs;
   for( auto& config : sorted )
   {
      std::sort( config.begin(), config.end(),
                 []( const RunRecord& a, const RunRecord& b )
                 { return a.name < b.name; } );
      for( std::size_t i = 1; i < config.size(); ++i )
         if( config[i].name == config[i - 1].name )
            throw std::invalid_argument( "duplicate instance '" +
                                         config[i].name + "' in one run" );
   }
   if( sorted.size() == 2 )
   {
      if( sorted[0].size() != sorted[1].size() )
         throw std::invalid_argument(
             "configurations cover different instance sets" );
      for( std::size_t i = 0; i < sorted[0].size(); ++i )
         if( sorted[0][i].name != sorted[1][i].name )
            throw std::invalid_argument(
                "configurations cover different instance sets" );
   }

   std::vector<std::string> tokens = options.subsets;
   if( tokens.empty() )
   {
      if( sorted.size() == 1 )
         tokens = { "all" };
      else
         tokens = { "all",  "affected", "0",
                    "1",    "10",       "100",
                    "1000", "diff-timeouts", "both-solved" };
   }
   std::vector<SubsetRule> rules;
   for( const std::string& token : tokens )
      rules.push_back( parseSubsetToken( token, sorted.size() ) );

   std::vector<std::string> labels = options.labels;
   while( labels.size() < sorted.size() )
      labels.push_back( "config " + std::to_string( labels.size() + 1 ) );

   std::string out = "configs: " + labels[0];
   if( sorted.size() == 2 )
      out += " vs " + labels[1];
   out += "\ntime limit: " + formatNumber( options.timeLimit ) + "\n";

   appendCell( out, "%-14s", "subset" );
   appendCell( out, "%10s", "instances" );
   for( std::size_t c = 0; c < sorted.size(); ++c )
   {
      appendCell( out, "%9s", "solved" );
      appendCell( out, "%9s", "time" );
      appendCell( out, "%10s", "nodes" );
   }
   if( sorted.size() == 2 )
   {
      appendCell( out, "%10s", "rel-time" );
      appendCell( out, "%11s", "rel-nodes" );
   }
   out += '\n';

   for( const SubsetRule& rule : rules )
   {
      std::vector<std::size_t> members;
      for( std::size_t i = 0; i < sorted[0].size(); ++i )
         if( inSubset( rule, sorted, i, options.timeLimit ) )
            members.push_back( i );

      appendCell( out, "%-14s", rule.label.c_str() );
      appendCell( out, "%10ld", long( members.size() ) );
      std::vector<ConfigAggregate> aggs;
      for( const auto& config : sorted )
      {
         if( members.empty() )
         {
            appendCell( out, "%9s", "--" );
            appendCell( out, "%9s", "--" );
            appendCell( out, "%10s", "--" );
            continue;
         }
         ConfigAggregate agg =
             aggregateSubset( config, members, options.timeLimit );
         appendCell( out, "%9ld", agg.solved );
         appendCell( out, "%9.1f", agg.timeSgm );
         appendCell( out, "%10.1f", agg.nodeSgm );
         aggs.push_back( agg );
      }
      if( sorted.size() == 2 )
      {
         if( aggs.size() == 2 && aggs[0].timeSgm > 0.0 )
            appendCell( out, "%10.2f", aggs[1].timeSgm / aggs[0].timeSgm );
         else
            appendCell( out, "%10s", "--" );
         if( aggs.size() == 2 && aggs[0].nodeSgm > 0.0 )
            appendCell( out, "%11.2f", aggs[1].nodeSgm / aggs[0].nodeSgm );
         else
            appendCell( out, "%11s", "--" );
      }
      out += '\n';
   }
   return out;
}

} // namespace minicip
