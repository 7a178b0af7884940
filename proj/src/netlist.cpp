#include <smpower/netlist.hpp>

#include <algorithm>
#include <array>
#include <bit>
#include <queue>

namespace smpower
{

namespace
{

struct cell_info
{
  std::string_view name;
  uint32_t cost;
  uint32_t arity;
};

/* static CMOS transistor counts */
constexpr std::array<cell_info, num_cell_kinds> cell_table{ {
    { "CONST0", 0u, 0u },
    { "CONST1", 0u, 0u },
    { "BUF", 4u, 1u },
    { "NOT", 2u, 1u },
    { "AND2", 6u, 2u },
    { "NAND2", 4u, 2u },
    { "OR2", 6u, 2u },
    { "NOR2", 4u, 2u },
    { "XOR2", 8u, 2u },
    { "XNOR2", 8u, 2u },
    { "MUX2", 12u, 3u },
    { "MAJ3", 10u, 3u },
} };

constexpr wire_id no_driver = ~wire_id{ 0 };
constexpr uint32_t input_driver = ~uint32_t{ 0 } - 1u;

} // namespace

std::string_view to_string( cell_kind kind )
{
  return cell_table[static_cast<size_t>( kind )].name;
}

std::optional<cell_kind> cell_kind_from_string( std::string_view name )
{
  for ( size_t i = 0; i < cell_table.size(); ++i )
  {
    if ( cell_table[i].name == name )
      return static_cast<cell_kind>( i );
  }
  return std::nullopt;
}

uint32_t transistor_cost( cell_kind kind )
{
  return cell_table[static_cast<size_t>( kind )].cost;
}

uint32_t arity( cell_kind kind )
{
  return cell_table[static_cast<size_t>( kind )].arity;
}

uint64_t evaluate_cell( cell_kind kind, std::span<uint64_t const> in )
{
  switch ( kind )
  {
  case cell_kind::const0:
    return 0u;
  case cell_kind::const1:
    return ~uint64_t{ 0 };
  case cell_kind::buf:
    return in[0];
  case cell_kind::inv:
    return ~in[0];
  case cell_kind::and2:
    return in[0] & in[1];
  case cell_kind::nand2:
    return ~( in[0] & in[1] );
  case cell_kind::or2:
    return in[0] | in[1];
  case cell_kind::nor2:
    return ~( in[0] | in[1] );
  case cell_kind::xor2:
    return in[0] ^ in[1];
  case cell_kind::xnor2:
    return ~( in[0] ^ in[1] );
  case cell_kind::mux2:
    return ( in[2] & in[1] ) | ( ~in[2] & in[0] );
  case cell_kind::maj3:
    return ( in[0] & in[1] ) | ( in[0] & in[2] ) | ( in[1] & in[2] );
  }
  return 0u;
}

uint64_t cost_table_hash()
{
  uint64_t h = 0xcbf29ce484222325ull; /* FNV-1a */
  auto mix = [&h]( uint64_t byte ) {
    h ^= byte;
    h *= 0x100000001b3ull;
  };
  for ( auto const& info : cell_table )
  {
    for ( char c : info.name )
      mix( static_cast<unsigned char>( c ) );
    mix( info.cost );
    mix( info.arity );
  }
  return h;
}

cell_netlist::cell_netlist( std::string name )
    : name_( std::move( name ) )
{
}

wire_id cell_netlist::add_wire( std::string name )
{
  if ( wire_index_.contains( name ) )
  {
    throw error( "duplicate wire name '" + name + "'" );
  }
  auto const id = static_cast<wire_id>( wire_names_.size() );
  wire_index_.emplace( name, id );
  wire_names_.push_back( std::move( name ) );
  return id;
}

wire_id cell_netlist::add_input( std::string name )
{
  auto const w = add_wire( std::move( name ) );
  inputs_.push_back( w );
  return w;
}

void cell_netlist::add_output( wire_id wire )
{
  outputs_.push_back( wire );
}

wire_id cell_netlist::add_cell( cell_kind kind, std::vector<wire_id> inputs, std::string output_name )
{
  if ( inputs.size() != arity( kind ) )
  {
    throw error( "cell " + std::string( to_string( kind ) ) + " expects " + std::to_string( arity( kind ) ) + " inputs" );
  }
  if ( output_name.empty() )
  {
    output_name = "n" + std::to_string( wire_names_.size() );
    while ( wire_index_.contains( output_name ) )
      output_name += "_";
  }
  auto const out = add_wire( std::move( output_name ) );
  add_cell_raw( kind, std::move( inputs ), out );
  return out;
}

void cell_netlist::add_cell_raw( cell_kind kind, std::vector<wire_id> inputs, wire_id output, std::string id )
{
  if ( id.empty() )
    id = "c" + std::to_string( cells_.size() );
  cells_.push_back( { std::move( id ), kind, std::move( inputs ), output } );
}

void cell_netlist::rename_wire( wire_id wire, std::string name )
{
  if ( wire_names_.at( wire ) == name )
    return;
  if ( wire_index_.contains( name ) )
  {
    throw error( "duplicate wire name '" + name + "'" );
  }
  wire_index_.erase( wire_names_[wire] );
  wire_index_.emplace( name, wire );
  wire_names_[wire] = std::move( name );
}

std::optional<wire_id> cell_netlist::find_wire( std::string_view name ) const
{
  if ( auto it = wire_index_.find( std::string( name ) ); it != wire_index_.end() )
    return it->second;
  return std::nullopt;
}

std::vector<std::vector<uint32_t>> cell_netlist::readers() const
{
  std::vector<std::vector<uint32_t>> result( wire_names_.size() );
  for ( uint32_t c = 0; c < cells_.size(); ++c )
  {
    for ( auto w : cells_[c].inputs )
    {
      if ( w < result.size() )
        result[w].push_back( c );
    }
  }
  return result;
}

std::vector<validation_issue> cell_netlist::validate() const
{
  std::vector<validation_issue> issues;
  auto const num = num_wires();

  std::vector<uint32_t> driver_count( num, 0u );
  for ( auto w : inputs_ )
  {
    if ( w >= num )
      issues.push_back( { "unknown-wire", "input port references unknown wire " + std::to_string( w ) } );
    else
      ++driver_count[w];
  }
  for ( auto const& c : cells_ )
  {
    if ( c.inputs.size() != arity( c.kind ) )
    {
      issues.push_back( { "arity", "cell " + c.id + " (" + std::string( to_string( c.kind ) ) + ") has " +
                                       std::to_string( c.inputs.size() ) + " inputs, expected " +
                                       std::to_string( arity( c.kind ) ) } );
    }
    for ( auto w : c.inputs )
    {
      if ( w >= num )
        issues.push_back( { "unknown-wire", "cell " + c.id + " reads unknown wire " + std::to_string( w ) } );
    }
    if ( c.output >= num )
      issues.push_back( { "unknown-wire", "cell " + c.id + " drives unknown wire " + std::to_string( c.output ) } );
    else
      ++driver_count[c.output];
  }
  for ( wire_id w = 0; w < num; ++w )
  {
    if ( driver_count[w] > 1u )
      issues.push_back( { "driver", "wire " + wire_names_[w] + " has " + std::to_string( driver_count[w] ) + " drivers" } );
  }
  for ( auto w : outputs_ )
  {
    if ( w >= num )
      issues.push_back( { "unknown-wire", "output port references unknown wire " + std::to_string( w ) } );
    else if ( driver_count[w] == 0u )
      issues.push_back( { "undriven-output", "output wire " + wire_names_[w] + " is not driven" } );
  }
  if ( !issues.empty() )
    return issues;

  try
  {
    (void)topological_order();
  }
  catch ( error const& e )
  {
    issues.push_back( { "cycle", e.what() } );
  }
  return issues;
}

std::vector<uint32_t> cell_netlist::topological_order() const
{
  auto const num = num_wires();
  std::vector<uint32_t> driver( num, no_driver );
  for ( auto w : inputs_ )
    driver[w] = input_driver;
  for ( uint32_t c = 0; c < cells_.size(); ++c )
    driver[cells_[c].output] = c;

  std::vector<uint32_t> pending( cells_.size(), 0u );
  std::vector<std::vector<uint32_t>> successors( cells_.size() );
  for ( uint32_t c = 0; c < cells_.size(); ++c )
  {
    for ( auto w : cells_[c].inputs )
    {
      if ( w < num && driver[w] != no_driver && driver[w] != input_driver )
      {
        ++pending[c];
        successors[driver[w]].push_back( c );
      }
    }
  }

  /* Kahn's algorithm with a FIFO keeps the original cell order where possible */
  std::vector<uint32_t> order;
  order.reserve( cells_.size() );
  std::queue<uint32_t> ready;
  for ( uint32_t c = 0; c < cells_.size(); ++c )
  {
    if ( pending[c] == 0u )
      ready.push( c );
  }
  while ( !ready.empty() )
  {
    auto const c = ready.front();
    ready.pop();
    order.push_back( c );
    for ( auto s : successors[c] )
    {
      if ( --pending[s] == 0u )
        ready.push( s );
    }
  }
  if ( order.size() != cells_.size() )
  {
    for ( uint32_t c = 0; c < cells_.size(); ++c )
    {
      if ( pending[c] != 0u )
        throw error( "combinational loop through cell " + cells_[c].id );
    }
  }
  return order;
}

uint64_t transistor_count( cell_netlist const& n )
{
  uint64_t total = 0;
  for ( auto const& c : n.cells() )
    total += transistor_cost( c.kind );
  return total;
}

uint32_t depth( cell_netlist const& n )
{
  /* -1 marks wires that no input port reaches */
  std::vector<int64_t> level( n.num_wires(), -1 );
  for ( auto w : n.inputs() )
    level[w] = 0;
  for ( auto c : n.topological_order() )
  {
    auto const& cl = n.cells()[c];
    int64_t best = -1;
    for ( auto w : cl.inputs )
      best = std::max( best, level[w] );
    level[cl.output] = best < 0 ? -1 : best + 1;
  }
  int64_t result = 0;
  for ( auto w : n.outputs() )
    result = std::max( result, level[w] );
  return static_cast<uint32_t>( result );
}

metrics_report measure( cell_netlist const& n )
{
  return { n.cell_count(), transistor_count( n ), depth( n ) };
}

bit_word evaluation_result::output_word() const
{
  uint64_t bits = 0;
  for ( size_t i = 0; i < outputs.size() && i < 64u; ++i )
  {
    if ( outputs[i] )
      bits |= uint64_t{ 1 } << i;
  }
  return bit_word( bits, static_cast<uint32_t>( std::clamp<size_t>( outputs.size(), 1u, 64u ) ) );
}

evaluation_result evaluate( cell_netlist const& n, std::span<bool const> inputs )
{
  if ( inputs.size() != n.inputs().size() )
  {
    throw error( "evaluation needs " + std::to_string( n.inputs().size() ) + " input values, got " +
                 std::to_string( inputs.size() ) );
  }
  std::vector<uint64_t> values( n.num_wires(), 0u );
  for ( size_t i = 0; i < inputs.size(); ++i )
    values[n.inputs()[i]] = inputs[i] ? 1u : 0u;

  std::array<uint64_t, 3> in{};
  for ( auto c : n.topological_order() )
  {
    auto const& cl = n.cells()[c];
    for ( size_t i = 0; i < cl.inputs.size(); ++i )
      in[i] = values[cl.inputs[i]];
    values[cl.output] = evaluate_cell( cl.kind, std::span<uint64_t const>( in.data(), cl.inputs.size() ) ) & 1u;
  }

  evaluation_result result;
  result.wire_values.resize( values.size() );
  for ( size_t w = 0; w < values.size(); ++w )
    result.wire_values[w] = values[w] != 0u;
  for ( auto w : n.outputs() )
    result.outputs.push_back( values[w] != 0u );
  return result;
}

evaluation_result evaluate( cell_netlist const& n, uint64_t pattern )
{
  if ( n.inputs().size() > 64u )
    throw error( "packed evaluation supports at most 64 inputs" );
  std::array<bool, 64> values{};
  for ( size_t i = 0; i < n.inputs().size(); ++i )
    values[i] = ( pattern >> i ) & 1u;
  return evaluate( n, std::span<bool const>( values.data(), n.inputs().size() ) );
}

uint64_t fanout_cost( cell_netlist const& n, wire_id wire )
{
  if ( wire >= n.num_wires() )
  {
    throw error( "unknown wire " + std::to_string( wire ) );
  }
  uint64_t total = 0;
  for ( auto const& c : n.cells() )
  {
    if ( std::find( c.inputs.begin(), c.inputs.end(), wire ) != c.inputs.end() )
      total += transistor_cost( c.kind );
  }
  return total;
}

uint64_t fanout_cost( cell_netlist const& n, std::string_view wire )
{
  auto const w = n.find_wire( wire );
  if ( !w )
  {
    throw error( "unknown wire '" + std::string( wire ) + "'" );
  }
  return fanout_cost( n, *w );
}

std::vector<uint64_t> fanout_costs( cell_netlist const& n )
{
  std::vector<uint64_t> costs( n.num_wires(), 0u );
  for ( auto const& c : n.cells() )
  {
    for ( size_t i = 0; i < c.inputs.size(); ++i )
    {
      /* a cell reading the same wire on several pins counts once */
      if ( std::find( c.inputs.begin(), c.inputs.begin() + i, c.inputs[i] ) == c.inputs.begin() + i )
        costs[c.inputs[i]] += transistor_cost( c.kind );
    }
  }
  return costs;
}

} // namespace smpower
