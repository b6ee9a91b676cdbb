#pragma once

#include "CLI11.hpp"

namespace korecli {

void register_capture(CLI::App& app);
void register_init_adapter(CLI::App& app);
void register_train(CLI::App& app);
void register_cosvd(CLI::App& app);
void register_augment(CLI::App& app);
void register_eval(CLI::App& app);

}  // namespace korecli
