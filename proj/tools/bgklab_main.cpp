#include <cstdio>
#include <exception>

#include "bgklab/io/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for a one-dimensional relaxation model "
               "coupled to two thermal reservoirs"};
  bgklab::io::RunConfig cfg;
  bgklab::io::attach_cli(app, cfg);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  try {
    return bgklab::io::run_command(cfg);
  } catch (const bgklab::parameter_error& e) {
    std::fprintf(stderr, "parameter error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
