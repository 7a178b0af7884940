#include <iostream>
#include <string>
#include <vector>

#include <smpower/cli.hpp>

int main( int argc, char** argv )
{
  std::vector<std::string> args( argv + 1, argv + argc );
  return smpower::run_cli( args, std::cout, std::cerr );
}
