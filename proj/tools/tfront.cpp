// Copyright 2026 The tfront Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "tfront/cli.hpp"

int main(int argc, char** argv) {
  return tfront::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
