#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"

#include "kore/demo.hpp"
#include "kore/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"kore-mkdemo - write the self-contained demo fixture"};
  std::string out;
  std::uint64_t seed = kore::kDemoSeed;
  app.add_option("--out", out, "Fixture directory")->required();
  app.add_option("--seed", seed, "Fixture seed");

  try {
    app.parse(argc, argv);
    kore::write_demo_fixture(out, seed);
    std::printf("demo fixture (seed %llu) -> %s\n",
                static_cast<unsigned long long>(seed), out.c_str());
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "kore-mkdemo: %s\n", e.what());
    return 1;
  }
  return 0;
}
