#include <smpower/netlist_io.hpp>

#include <fstream>
#include <sstream>

namespace smpower
{

nlohmann::json to_json( cell_netlist const& n )
{
  nlohmann::json doc;
  doc["name"] = n.name();
  auto& inputs = doc["inputs"] = nlohmann::json::array();
  for ( auto w : n.inputs() )
    inputs.push_back( n.wire_name( w ) );
  auto& outputs = doc["outputs"] = nlohmann::json::array();
  for ( auto w : n.outputs() )
    outputs.push_back( n.wire_name( w ) );
  auto& cells = doc["cells"] = nlohmann::json::array();
  for ( auto const& c : n.cells() )
  {
    nlohmann::json entry;
    entry["id"] = c.id;
    entry["kind"] = std::string( to_string( c.kind ) );
    auto& ins = entry["inputs"] = nlohmann::json::array();
    for ( auto w : c.inputs )
      ins.push_back( n.wire_name( w ) );
    entry["output"] = n.wire_name( c.output );
    cells.push_back( std::move( entry ) );
  }
  return doc;
}

cell_netlist netlist_from_json( nlohmann::json const& doc )
{
  try
  {
    cell_netlist n( doc.value( "name", std::string( "top" ) ) );
    auto wire = [&n]( std::string const& name ) {
      if ( auto w = n.find_wire( name ) )
        return *w;
      return n.add_wire( name );
    };
    for ( auto const& name : doc.at( "inputs" ) )
    {
      auto const s = name.get<std::string>();
      if ( n.find_wire( s ) )
        throw error( "duplicate input port '" + s + "'" );
      n.add_input( s );
    }
    for ( auto const& entry : doc.at( "cells" ) )
    {
      auto const kind_name = entry.at( "kind" ).get<std::string>();
      auto const kind = cell_kind_from_string( kind_name );
      if ( !kind )
        throw error( "unknown cell kind '" + kind_name + "'" );
      std::vector<wire_id> ins;
      for ( auto const& in : entry.at( "inputs" ) )
        ins.push_back( wire( in.get<std::string>() ) );
      auto const out = wire( entry.at( "output" ).get<std::string>() );
      n.add_cell_raw( *kind, std::move( ins ), out, entry.value( "id", std::string() ) );
    }
    for ( auto const& name : doc.at( "outputs" ) )
      n.add_output( wire( name.get<std::string>() ) );
    return n;
  }
  catch ( nlohmann::json::exception const& e )
  {
    throw error( std::string( "malformed netlist document: " ) + e.what() );
  }
}

std::string write_netlist_string( cell_netlist const& n )
{
  return to_json( n ).dump( 2 ) + "\n";
}

cell_netlist read_netlist_string( std::string const& text )
{
  nlohmann::json doc;
  try
  {
    doc = nlohmann::json::parse( text );
  }
  catch ( nlohmann::json::exception const& e )
  {
    throw error( std::string( "netlist is not valid JSON: " ) + e.what() );
  }
  return netlist_from_json( doc );
}

void write_netlist_file( cell_netlist const& n, std::filesystem::path const& path )
{
  std::ofstream os( path, std::ios::binary );
  if ( !os )
    throw error( "cannot open '" + path.string() + "' for writing" );
  os << write_netlist_string( n );
}

cell_netlist read_netlist_file( std::filesystem::path const& path )
{
  std::ifstream is( path, std::ios::binary );
  if ( !is )
    throw error( "cannot open '" + path.string() + "'" );
  std::ostringstream ss;
  ss << is.rdbuf();
  return read_netlist_string( ss.str() );
}

} // namespace smpower
