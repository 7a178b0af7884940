#include <smpower/mapping.hpp>

#include <algorithm>
#include <array>
#include <functional>
#include <optional>
#include <unordered_set>

namespace smpower
{

aig_network to_aig( cell_netlist const& n )
{
  aig_network aig;
  aig.set_name( n.name() );
  std::vector<std::optional<aig_signal>> sig( n.num_wires() );
  for ( auto w : n.inputs() )
    sig[w] = aig.create_pi( n.wire_name( w ) );

  auto get = [&]( wire_id w ) {
    if ( !sig[w] )
      throw error( "wire '" + n.wire_name( w ) + "' is read but never driven" );
    return *sig[w];
  };
  for ( auto c : n.topological_order() )
  {
    auto const& cl = n.cells()[c];
    if ( cl.inputs.size() != arity( cl.kind ) )
      throw error( "cell '" + cl.id + "' has the wrong number of inputs" );
    std::array<aig_signal, 3> in{};
    for ( size_t k = 0; k < cl.inputs.size(); ++k )
      in[k] = get( cl.inputs[k] );
    aig_signal out = aig_const0;
    switch ( cl.kind )
    {
    case cell_kind::const0: out = aig_const0; break;
    case cell_kind::const1: out = aig_const1; break;
    case cell_kind::buf: out = in[0]; break;
    case cell_kind::inv: out = operator_not( in[0] ); break;
    case cell_kind::and2: out = aig.create_and( in[0], in[1] ); break;
    case cell_kind::nand2: out = aig.create_nand( in[0], in[1] ); break;
    case cell_kind::or2: out = aig.create_or( in[0], in[1] ); break;
    case cell_kind::nor2: out = aig.create_nor( in[0], in[1] ); break;
    case cell_kind::xor2: out = aig.create_xor( in[0], in[1] ); break;
    case cell_kind::xnor2: out = aig.create_xnor( in[0], in[1] ); break;
    case cell_kind::mux2: out = aig.create_mux( in[2], in[1], in[0] ); break;
    case cell_kind::maj3: out = aig.create_maj( in[0], in[1], in[2] ); break;
    }
    sig[cl.output] = out;
  }
  for ( auto w : n.outputs() )
    aig.create_po( get( w ), n.wire_name( w ) );
  return aig;
}

namespace
{

/* a (node, polarity) pair is keyed by the literal of that polarity */
using key = aig_signal;

struct choice
{
  enum class type : uint8_t
  {
    none,
    input,
    constant,
    alias,
    inverter,
    gate
  };
  type kind = type::none;
  cell_kind cell = cell_kind::buf;
  uint8_t num_pins = 0;
  std::array<key, 3> pins{};

  uint32_t cost() const
  {
    switch ( kind )
    {
    case type::inverter: return transistor_cost( cell_kind::inv );
    case type::gate: return transistor_cost( cell );
    default: return 0u;
    }
  }
  std::span<key const> children() const
  {
    switch ( kind )
    {
    case type::alias:
    case type::inverter: return { pins.data(), 1u };
    case type::gate: return { pins.data(), num_pins };
    default: return {};
    }
  }
};

struct match
{
  cell_kind cell;
  uint8_t num_pins;
  std::array<uint8_t, 3> leaf;
  std::array<bool, 3> negated;
};

constexpr std::array<uint64_t, 3> projections3 = { 0xaau, 0xccu, 0xf0u };

/* every library gate with every pin-to-leaf assignment and pin polarity, by three-variable function */
std::array<std::vector<match>, 256> const& match_table()
{
  static auto const table = [] {
    std::array<std::vector<match>, 256> t;
    auto add = [&]( cell_kind kind, std::array<uint8_t, 3> leaf, uint8_t pins ) {
      for ( uint32_t phases = 0; phases < ( 1u << pins ); ++phases )
      {
        std::array<uint64_t, 3> in{};
        match m{ kind, pins, leaf, {} };
        for ( uint8_t p = 0; p < pins; ++p )
        {
          m.negated[p] = ( phases >> p ) & 1u;
          in[p] = projections3[leaf[p]] ^ ( m.negated[p] ? 0xffu : 0u );
        }
        auto const f = evaluate_cell( kind, std::span<uint64_t const>( in.data(), pins ) ) & 0xffu;
        t[f].push_back( m );
      }
    };
    for ( auto kind : { cell_kind::and2, cell_kind::nand2, cell_kind::or2, cell_kind::nor2, cell_kind::xor2, cell_kind::xnor2 } )
      for ( uint8_t i = 0; i < 3u; ++i )
        for ( uint8_t j = i + 1u; j < 3u; ++j )
          add( kind, { i, j, 0 }, 2u );
    std::array<uint8_t, 3> perm = { 0, 1, 2 };
    do
    {
      add( cell_kind::mux2, perm, 3u );
    } while ( std::next_permutation( perm.begin(), perm.end() ) );
    add( cell_kind::maj3, { 0, 1, 2 }, 3u );
    return t;
  }();
  return table;
}

struct cut
{
  uint8_t size = 0;
  uint8_t tt = 0;
  std::array<aig_node, 3> leaves{};

  bool dominates( cut const& other ) const
  {
    return std::includes( other.leaves.begin(), other.leaves.begin() + other.size, leaves.begin(), leaves.begin() + size );
  }
};

constexpr size_t max_cuts = 24u;

/* re-expresses a cut function over a superset of its leaves */
uint8_t expand_tt( cut const& c, std::array<aig_node, 3> const& leaves, uint8_t size )
{
  std::array<uint8_t, 3> position{};
  for ( uint8_t i = 0; i < c.size; ++i )
    position[i] = static_cast<uint8_t>( std::find( leaves.begin(), leaves.begin() + size, c.leaves[i] ) - leaves.begin() );
  uint8_t result = 0;
  for ( uint32_t m = 0; m < 8u; ++m )
  {
    uint32_t index = 0;
    for ( uint8_t i = 0; i < c.size; ++i )
      index |= ( ( m >> position[i] ) & 1u ) << i;
    result |= static_cast<uint8_t>( ( ( c.tt >> index ) & 1u ) << m );
  }
  return result;
}

std::vector<std::vector<cut>> enumerate_cuts( aig_network const& aig )
{
  std::vector<std::vector<cut>> cuts( aig.size() );
  auto trivial = []( aig_node n ) {
    cut c;
    c.size = 1;
    c.tt = 0xaau;
    c.leaves[0] = n;
    return c;
  };
  for ( aig_node n = 1; n <= aig.num_pis(); ++n )
    cuts[n].push_back( trivial( n ) );

  for ( aig_node n = aig.num_pis() + 1u; n < aig.size(); ++n )
  {
    auto const f0 = aig.fanin0( n ), f1 = aig.fanin1( n );
    auto const& c0s = cuts[get_node( f0 )];
    auto const& c1s = cuts[get_node( f1 )];
    std::vector<cut> result;
    for ( auto const& a : c0s )
    {
      for ( auto const& b : c1s )
      {
        cut u;
        std::array<aig_node, 6> merged{};
        auto const last = std::set_union( a.leaves.begin(), a.leaves.begin() + a.size, b.leaves.begin(), b.leaves.begin() + b.size, merged.begin() );
        auto const size = static_cast<size_t>( last - merged.begin() );
        if ( size > 3u )
          continue;
        u.size = static_cast<uint8_t>( size );
        std::copy( merged.begin(), last, u.leaves.begin() );
        uint8_t const ta = expand_tt( a, u.leaves, u.size ) ^ ( is_complemented( f0 ) ? 0xffu : 0u );
        uint8_t const tb = expand_tt( b, u.leaves, u.size ) ^ ( is_complemented( f1 ) ? 0xffu : 0u );
        u.tt = ta & tb;
        bool dominated = false;
        for ( auto const& r : result )
        {
          if ( r.dominates( u ) )
          {
            dominated = true;
            break;
          }
        }
        if ( dominated )
          continue;
        std::erase_if( result, [&]( cut const& r ) { return u.dominates( r ); } );
        result.push_back( u );
      }
    }
    std::stable_sort( result.begin(), result.end(), []( cut const& x, cut const& y ) { return x.size < y.size; } );
    if ( result.size() > max_cuts )
      result.resize( max_cuts );
    result.push_back( trivial( n ) );
    cuts[n] = std::move( result );
  }
  return cuts;
}

class mapper
{
public:
  explicit mapper( aig_network const& aig )
      : aig_( aig ),
        cuts_( enumerate_cuts( aig ) ),
        choices_( 2u * aig.size() ),
        area_( 2u * aig.size(), 0.0 ),
        refs_( 2u * aig.size(), 0u )
  {
    choices_[0].kind = choice::type::constant;
    choices_[1].kind = choice::type::constant;
    for ( aig_node n = 1; n <= aig.num_pis(); ++n )
    {
      choices_[make_signal( n )].kind = choice::type::input;
      choices_[make_signal( n, true )] = inverter_of( make_signal( n ) );
    }
  }

  std::vector<choice> run()
  {
    auto const fanouts = aig_.fanout_counts();
    std::vector<double> estimate( aig_.size() );
    for ( aig_node n = 0; n < aig_.size(); ++n )
      estimate[n] = std::max( 1.0, static_cast<double>( fanouts[n] ) );

    std::optional<std::vector<choice>> best;
    uint64_t best_area = 0;
    auto keep_if_better = [&]( uint64_t area ) {
      if ( !best || area < best_area )
      {
        best = choices_;
        best_area = area;
      }
    };

    for ( uint32_t round = 0; round < 3u; ++round )
    {
      area_flow( estimate );
      auto const area = cover();
      keep_if_better( area );
      std::vector<uint32_t> used( aig_.size(), 0u );
      for ( key k = 0; k < refs_.size(); ++k )
        used[get_node( k )] += refs_[k];
      for ( aig_node n = 0; n < aig_.size(); ++n )
        estimate[n] = std::max( 1.0, 0.5 * ( estimate[n] + used[n] ) );
    }

    choices_ = *best;
    cover();
    for ( uint32_t round = 0; round < 3u; ++round )
    {
      exact_area_pass();
      keep_if_better( total_area() );
    }
    return *best;
  }

private:
  static choice inverter_of( key k )
  {
    choice c;
    c.kind = choice::type::inverter;
    c.pins[0] = k;
    return c;
  }

  /* enumerates the non-inverter implementations of (n, polarity) */
  template<typename Fn>
  void foreach_candidate( aig_node n, bool complemented, Fn&& fn ) const
  {
    auto const& table = match_table();
    for ( auto const& c : cuts_[n] )
    {
      if ( c.size == 1u && c.leaves[0] == n )
        continue;
      uint8_t const f = c.tt ^ ( complemented ? 0xffu : 0u );
      if ( f == 0u || f == 0xffu )
      {
        choice ch;
        ch.kind = choice::type::alias;
        ch.pins[0] = f == 0u ? aig_const0 : aig_const1;
        fn( ch );
        continue;
      }
      bool aliased = false;
      for ( uint8_t i = 0; i < c.size; ++i )
      {
        auto const p = static_cast<uint8_t>( projections3[i] );
        if ( f == p || f == static_cast<uint8_t>( ~p ) )
        {
          choice ch;
          ch.kind = choice::type::alias;
          ch.pins[0] = make_signal( c.leaves[i], f != p );
          fn( ch );
          aliased = true;
        }
      }
      if ( aliased )
        continue;
      for ( auto const& m : table[f] )
      {
        if ( std::any_of( m.leaf.begin(), m.leaf.begin() + m.num_pins, [&]( uint8_t l ) { return l >= c.size; } ) )
          continue;
        choice ch;
        ch.kind = choice::type::gate;
        ch.cell = m.cell;
        ch.num_pins = m.num_pins;
        for ( uint8_t p = 0; p < m.num_pins; ++p )
          ch.pins[p] = make_signal( c.leaves[m.leaf[p]], m.negated[p] );
        fn( ch );
      }
    }
  }

  void area_flow( std::vector<double> const& estimate )
  {
    for ( aig_node n = 1; n <= aig_.num_pis(); ++n )
    {
      area_[make_signal( n )] = 0.0;
      area_[make_signal( n, true )] = transistor_cost( cell_kind::inv );
    }
    auto flow = [&]( key k ) { return area_[k] / estimate[get_node( k )]; };
    for ( aig_node n = aig_.num_pis() + 1u; n < aig_.size(); ++n )
    {
      std::array<double, 2> best_area{ 1e30, 1e30 };
      std::array<choice, 2> best_choice{};
      for ( bool p : { false, true } )
      {
        foreach_candidate( n, p, [&]( choice const& ch ) {
          double a = ch.cost();
          for ( auto k : ch.children() )
            a += flow( k );
          if ( a < best_area[p] )
          {
            best_area[p] = a;
            best_choice[p] = ch;
          }
        } );
      }
      for ( bool p : { false, true } )
      {
        double const via_inverter = best_area[!p] + transistor_cost( cell_kind::inv );
        bool const use_inverter = via_inverter < best_area[p] && best_choice[!p].kind != choice::type::none;
        area_[make_signal( n, p )] = use_inverter ? via_inverter : best_area[p];
        choices_[make_signal( n, p )] = use_inverter ? inverter_of( make_signal( n, !p ) ) : best_choice[p];
      }
    }
  }

  uint64_t reference( key k )
  {
    if ( refs_[k]++ != 0u )
      return 0u;
    auto const& ch = choices_[k];
    uint64_t area = ch.cost();
    for ( auto c : ch.children() )
      area += reference( c );
    return area;
  }

  uint64_t dereference( key k )
  {
    if ( --refs_[k] != 0u )
      return 0u;
    auto const& ch = choices_[k];
    uint64_t area = ch.cost();
    for ( auto c : ch.children() )
      area += dereference( c );
    return area;
  }

  uint64_t cover()
  {
    std::fill( refs_.begin(), refs_.end(), 0u );
    uint64_t area = 0;
    for ( auto f : aig_.pos() )
      area += reference( f );
    return area;
  }

  uint64_t total_area() const
  {
    uint64_t area = 0;
    for ( key k = 0; k < refs_.size(); ++k )
      if ( refs_[k] != 0u )
        area += choices_[k].cost();
    return area;
  }

  void exact_area_pass()
  {
    for ( aig_node n = aig_.num_pis() + 1u; n < aig_.size(); ++n )
    {
      for ( bool p : { false, true } )
      {
        key const k = make_signal( n, p );
        if ( refs_[k] == 0u )
          continue;
        for ( auto c : choices_[k].children() )
          dereference( c );
        choice best = choices_[k];
        uint64_t best_area = evaluate( best );

        foreach_candidate( n, p, [&]( choice const& ch ) {
          auto const a = evaluate( ch );
          if ( a < best_area )
          {
            best_area = a;
            best = ch;
          }
        } );
        key const other = make_signal( n, !p );
        /* two inverters must never point at each other */
        if ( choices_[other].kind != choice::type::inverter )
        {
          auto const inv = inverter_of( other );
          if ( auto const a = evaluate( inv ); a < best_area )
          {
            best_area = a;
            best = inv;
          }
        }
        choices_[k] = best;
        for ( auto c : best.children() )
          reference( c );
      }
    }
  }

  uint64_t evaluate( choice const& ch )
  {
    uint64_t area = ch.cost();
    for ( auto c : ch.children() )
      area += reference( c );
    for ( auto c : ch.children() )
      dereference( c );
    return area;
  }

  aig_network const& aig_;
  std::vector<std::vector<cut>> cuts_;
  std::vector<choice> choices_;
  std::vector<double> area_;
  std::vector<uint32_t> refs_;
};

class netlist_writer
{
public:
  netlist_writer( aig_network const& aig, std::vector<choice> const& choices )
      : aig_( aig ),
        choices_( choices ),
        wires_( choices.size() ),
        result_( aig.name() )
  {
    for ( auto const& name : aig.pi_names() )
      reserved_.insert( name );
    for ( auto const& name : aig.po_names() )
      reserved_.insert( name );
    for ( uint32_t i = 0; i < aig.num_pis(); ++i )
      wires_[make_signal( aig.pi_at( i ) )] = result_.add_input( aig.pi_names()[i] );

    for ( uint32_t o = 0; o < aig.num_pos(); ++o )
    {
      auto const k = resolve( aig.po_at( o ) );
      auto const& name = aig.po_names()[o];
      if ( choices_[k].kind == choice::type::input || names_.count( k ) || taken_names_.count( name ) )
        continue;
      bool const is_input_name = std::find( aig.pi_names().begin(), aig.pi_names().end(), name ) != aig.pi_names().end();
      if ( is_input_name )
        continue;
      names_.emplace( k, name );
      taken_names_.insert( name );
    }
  }

  cell_netlist write() &&
  {
    for ( auto f : aig_.pos() )
      result_.add_output( wire( f ) );
    return std::move( result_ );
  }

private:
  key resolve( key k ) const
  {
    while ( choices_[k].kind == choice::type::alias )
      k = choices_[k].pins[0];
    return k;
  }

  std::string name_for( key k )
  {
    if ( auto it = names_.find( k ); it != names_.end() )
      return it->second;
    std::string base = "n" + std::to_string( get_node( k ) ) + ( is_complemented( k ) ? "_n" : "" );
    auto name = base;
    for ( uint32_t i = 1; reserved_.count( name ) || result_.find_wire( name ); ++i )
      name = base + "_" + std::to_string( i );
    return name;
  }

  wire_id wire( key k )
  {
    k = resolve( k );
    if ( wires_[k] )
      return *wires_[k];
    auto const& ch = choices_[k];
    wire_id w = 0;
    switch ( ch.kind )
    {
    case choice::type::constant:
      w = result_.add_cell( k == aig_const1 ? cell_kind::const1 : cell_kind::const0, {}, name_for( k ) );
      break;
    case choice::type::inverter:
    {
      auto const in = wire( ch.pins[0] );
      w = result_.add_cell( cell_kind::inv, { in }, name_for( k ) );
      break;
    }
    case choice::type::gate:
    {
      std::vector<wire_id> ins;
      for ( auto c : ch.children() )
        ins.push_back( wire( c ) );
      w = result_.add_cell( ch.cell, std::move( ins ), name_for( k ) );
      break;
    }
    default:
      throw error( "internal mapping error: unimplemented signal" );
    }
    wires_[k] = w;
    return w;
  }

  aig_network const& aig_;
  std::vector<choice> const& choices_;
  std::vector<std::optional<wire_id>> wires_;
  std::unordered_map<key, std::string> names_;
  std::unordered_set<std::string> taken_names_;
  std::unordered_set<std::string> reserved_;
  cell_netlist result_;
};

std::vector<choice> naive_choices( aig_network const& aig )
{
  std::vector<choice> choices( 2u * aig.size() );
  choices[0].kind = choice::type::constant;
  choices[1].kind = choice::type::constant;
  for ( aig_node n = 1; n < aig.size(); ++n )
  {
    auto& pos = choices[make_signal( n )];
    if ( aig.is_pi( n ) )
    {
      pos.kind = choice::type::input;
    }
    else
    {
      pos.kind = choice::type::gate;
      pos.cell = cell_kind::and2;
      pos.num_pins = 2;
      pos.pins = { aig.fanin0( n ), aig.fanin1( n ), 0 };
    }
    auto& neg = choices[make_signal( n, true )];
    neg.kind = choice::type::inverter;
    neg.pins[0] = make_signal( n );
  }
  return choices;
}

} // namespace

cell_netlist naive_expansion( aig_network const& aig )
{
  auto const choices = naive_choices( aig );
  return netlist_writer( aig, choices ).write();
}

cell_netlist from_aig( aig_network const& aig )
{
  auto const choices = mapper( aig ).run();
  auto mapped = netlist_writer( aig, choices ).write();
  auto naive = naive_expansion( aig );
  return transistor_count( mapped ) <= transistor_count( naive ) ? std::move( mapped ) : std::move( naive );
}

} // namespace smpower
