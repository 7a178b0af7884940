#include <smpower/configurations.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>

namespace smpower
{

namespace
{

constexpr std::array<configuration, 5> configurations = { {
    { config_id::A, std::nullopt, block_kind::mul_tc_tc },
    { config_id::B, block_kind::enc_tc_sme, block_kind::mul_sme_tc },
    { config_id::C, block_kind::enc_tc_sm, block_kind::mul_sm_tc },
    { config_id::D, block_kind::enc_tcs_sm, block_kind::mul_sm_tc },
    { config_id::E, std::nullopt, block_kind::mul_sm_sm },
} };

std::string format_fixed( double v, int digits )
{
  char buffer[48];
  std::snprintf( buffer, sizeof( buffer ), "%.*f", digits, v );
  return buffer;
}

/* memoizes one netlist per block */
class block_cache
{
public:
  block_cache( block_source const& source, uint32_t width )
      : source_( source ), width_( width )
  {
  }

  cell_netlist const& get( block_kind b )
  {
    auto it = cache_.find( b );
    if ( it == cache_.end() )
      it = cache_.emplace( b, source_( { b, width_ } ) ).first;
    return it->second;
  }

private:
  block_source const& source_;
  uint32_t width_;
  std::map<block_kind, cell_netlist> cache_;
};

std::vector<config_id> with_reference( std::vector<config_id> configs )
{
  /* the reference is evaluated first */
  std::erase( configs, config_id::A );
  configs.insert( configs.begin(), config_id::A );
  return configs;
}

} // namespace

configuration const& config( config_id id )
{
  return configurations[static_cast<size_t>( id )];
}

char to_char( config_id id )
{
  return static_cast<char>( 'A' + static_cast<int>( id ) );
}

std::optional<config_id> config_from_string( std::string_view name )
{
  if ( name.size() != 1u )
    return std::nullopt;
  auto const c = static_cast<char>( std::toupper( static_cast<unsigned char>( name[0] ) ) );
  if ( c < 'A' || c > 'E' )
    return std::nullopt;
  return static_cast<config_id>( c - 'A' );
}

stimulus_spec block_stimulus( block_spec const& spec, double sigma, uint32_t cycles, uint64_t seed )
{
  stimulus_spec s;
  s.sigma = sigma;
  s.cycles = cycles;
  s.seed = seed;
  s.range = operand_range( spec );
  s.operands = num_operands( spec.block );
  s.encoding = info( spec.block ).input_format;
  s.width = spec.width;
  return s;
}

std::vector<wire_id> instantiate( cell_netlist& into, cell_netlist const& sub, std::vector<wire_id> const& inputs,
                                  std::string const& prefix )
{
  if ( inputs.size() != sub.inputs().size() )
    throw error( "instance of " + sub.name() + " expects " + std::to_string( sub.inputs().size() ) + " inputs" );

  std::vector<std::optional<wire_id>> map( sub.num_wires() );
  for ( size_t i = 0; i < inputs.size(); ++i )
    map[sub.inputs()[i]] = inputs[i];
  auto wire = [&]( wire_id w ) {
    if ( !map[w] )
      map[w] = into.add_wire( prefix + sub.wire_name( w ) );
    return *map[w];
  };
  for ( auto c : sub.topological_order() )
  {
    auto const& cl = sub.cells()[c];
    std::vector<wire_id> ins;
    for ( auto w : cl.inputs )
      ins.push_back( wire( w ) );
    into.add_cell_raw( cl.kind, std::move( ins ), wire( cl.output ), prefix + cl.id );
  }
  std::vector<wire_id> outputs;
  for ( auto w : sub.outputs() )
    outputs.push_back( wire( w ) );
  return outputs;
}

cell_netlist composite_netlist( cell_netlist const* encoder, cell_netlist const& multiplier, uint32_t width )
{
  cell_netlist n( encoder ? encoder->name() + "+" + multiplier.name() : multiplier.name() );
  std::array<std::vector<wire_id>, 2> operands;
  for ( uint32_t k = 0; k < 2u; ++k )
  {
    auto const port = std::string( k == 0u ? "a" : "b" );
    for ( uint32_t i = 0; i < width; ++i )
      operands[k].push_back( n.add_input( port + "[" + std::to_string( i ) + "]" ) );
    if ( encoder )
      operands[k] = instantiate( n, *encoder, operands[k], "enc_" + port + "." );
  }
  auto inputs = operands[0];
  inputs.insert( inputs.end(), operands[1].begin(), operands[1].end() );
  for ( auto w : instantiate( n, multiplier, inputs, "mul." ) )
    n.add_output( w );
  return n;
}

block_source generated_blocks()
{
  return []( block_spec const& spec ) { return build_block( spec ); };
}

cell_netlist composite_netlist( config_id id, uint32_t width, block_source const& source )
{
  auto const& c = config( id );
  auto const multiplier = source( { c.multiplier, width } );
  if ( !c.encoder )
    return composite_netlist( nullptr, multiplier, width );
  auto const encoder = source( { *c.encoder, width } );
  return composite_netlist( &encoder, multiplier, width );
}

double delta_percent( double value, double reference )
{
  if ( reference == 0.0 )
    throw error( "relative change against a zero reference" );
  return 100.0 * ( value - reference ) / reference;
}

std::vector<config_swact_row> swact_table( report_options const& opts, block_source const& source )
{
  block_cache blocks( source, opts.width );
  std::map<std::pair<block_kind, double>, double> measured;
  auto s = [&]( block_kind b, double sigma ) {
    auto const key = std::make_pair( b, sigma );
    if ( auto it = measured.find( key ); it != measured.end() )
      return it->second;
    auto const spec = block_stimulus( { b, opts.width }, sigma, opts.cycles, opts.seed );
    auto const value = swact( blocks.get( b ), spec ).s;
    measured.emplace( key, value );
    return value;
  };

  std::vector<config_swact_row> rows;
  for ( auto sigma : opts.sigmas )
  {
    std::optional<double> reference;
    for ( auto id : with_reference( opts.configs ) )
    {
      auto const& c = config( id );
      swact_report mult;
      mult.s = s( c.multiplier, sigma );
      mult.sigma = sigma;
      mult.cycles = opts.cycles;
      std::optional<swact_report> enc;
      if ( c.encoder )
      {
        enc = mult;
        enc->s = s( *c.encoder, sigma );
      }
      auto const total = config_swact( enc, mult );

      config_swact_row row{ id, sigma, enc ? enc->s : 0.0, mult.s, total.s, 0.0 };
      if ( id == config_id::A )
        reference = row.s_tot;
      row.delta_percent = delta_percent( row.s_tot, *reference );
      if ( std::find( opts.configs.begin(), opts.configs.end(), id ) != opts.configs.end() )
        rows.push_back( row );
    }
  }
  return rows;
}

std::vector<config_area_row> area_table( report_options const& opts, block_source const& source )
{
  block_cache blocks( source, opts.width );
  std::vector<config_area_row> rows;
  std::optional<config_area_row> reference;
  for ( auto id : with_reference( opts.configs ) )
  {
    auto const& c = config( id );
    config_area_row row{};
    row.id = id;
    auto const m = measure( blocks.get( c.multiplier ) );
    row.t_m = m.transistors;
    row.d_m = m.depth;
    if ( c.encoder )
    {
      auto const e = measure( blocks.get( *c.encoder ) );
      row.t_e = e.transistors;
      row.d_e = e.depth;
    }
    row.t_tot = 2u * row.t_e + row.t_m;
    row.d_tot = row.d_e + row.d_m;
    if ( id == config_id::A )
      reference = row;
    row.t_delta_percent = delta_percent( static_cast<double>( row.t_tot ), static_cast<double>( reference->t_tot ) );
    row.d_delta_percent = delta_percent( static_cast<double>( row.d_tot ), static_cast<double>( reference->d_tot ) );
    if ( std::find( opts.configs.begin(), opts.configs.end(), id ) != opts.configs.end() )
      rows.push_back( row );
  }
  return rows;
}

std::string format_percent( double value )
{
  auto text = format_fixed( value, 1 );
  return text == "-0.0" ? "0.0" : text;
}

std::string swact_table_csv( std::vector<config_swact_row> const& rows )
{
  std::string csv = "config,sigma,s_enc,s_mult,s_tot,delta_percent\n";
  for ( auto const& r : rows )
  {
    csv += std::string( 1, to_char( r.id ) ) + ',' + format_fixed( r.sigma, 1 ) + ',' + format_fixed( r.s_enc, 3 ) + ',' +
           format_fixed( r.s_mult, 3 ) + ',' + format_fixed( r.s_tot, 3 ) + ',' + format_percent( r.delta_percent ) + '\n';
  }
  return csv;
}

std::string area_table_csv( std::vector<config_area_row> const& rows )
{
  std::string csv = "config,t_e,t_m,t_tot,t_delta_percent,d_e,d_m,d_tot,d_delta_percent\n";
  for ( auto const& r : rows )
  {
    csv += std::string( 1, to_char( r.id ) ) + ',' + std::to_string( r.t_e ) + ',' + std::to_string( r.t_m ) + ',' +
           std::to_string( r.t_tot ) + ',' + format_percent( r.t_delta_percent ) + ',' + std::to_string( r.d_e ) + ',' +
           std::to_string( r.d_m ) + ',' + std::to_string( r.d_tot ) + ',' + format_percent( r.d_delta_percent ) + '\n';
  }
  return csv;
}

} // namespace smpower
