#include <cstdio>
#include <exception>

#include "CLI11.hpp"

#include "commands.hpp"
#include "kore/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"kore - knowledge-preserving adapter toolkit"};
  app.require_subcommand(1);

  korecli::register_capture(app);
  korecli::register_init_adapter(app);
  korecli::register_train(app);
  korecli::register_cosvd(app);
  korecli::register_augment(app);
  korecli::register_eval(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // exit 0 with the synopsis
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "kore: %s\nRun 'kore --help' for usage.\n", e.what());
    return 2;
  } catch (const kore::Error& e) {
    std::fprintf(stderr, "kore: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "kore: %s\n", e.what());
    return 1;
  }
  return 0;
}
