//
// Copyright 2026 The PrivContrast Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include <iostream>

#include "privcontrast/cli.h"

int main(int argc, char** argv) {
  int exit_code = 0;
  auto config = privcontrast::parse_args(argc, argv, exit_code, std::cout,
                                         std::cerr);
  if (!config) return exit_code;
  return privcontrast::run(*config, std::cout, std::cerr);
}
