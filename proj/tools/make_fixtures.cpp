/*
   Copyright 2026 The hardy-factor authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

// Regenerates the shipped fixture files. Run from the repository root:
//   build/tools/make_fixtures [fixtures-dir]

#include <fstream>
#include <iostream>

#include "hardy/examples.hpp"
#include "hardy/serialization.hpp"

int main(int argc, char** argv) {
  const std::string dir = argc > 1 ? argv[1] : "fixtures";
  using hardy::Json;

  const auto write = [&](const std::string& name, const Json& j) {
    const std::string path = dir + "/" + name;
    std::ofstream f(path);
    if (!f) {
      std::cerr << "cannot write " << path << "\n";
      return 1;
    }
    f << j.dump(2) << "\n";
    std::cout << "wrote " << path << "\n";
    return 0;
  };

  int rc = 0;
  rc |= write("example_1_6.json",
              hardy::io::completion_problem_to_json(
                  hardy::fixtures::exponential_column_problem(3, 8)));

  {
    hardy::io::SubspaceProblem p;
    p.vars = 2;
    p.dimE = 1;
    p.window = hardy::DegreeWindow(2, 4);
    p.generators = hardy::fixtures::coordinate_pair_generators(p.window);
    rc |= write("non_dc_z1_z2.json", hardy::io::subspace_problem_to_json(p));
  }
  {
    hardy::io::SubspaceProblem p;
    p.vars = 2;
    p.dimE = 1;
    p.window = hardy::DegreeWindow(2, 4);
    p.generators = hardy::fixtures::monomial_inner_generators(p.window);
    rc |= write("monomial_inner.json", hardy::io::subspace_problem_to_json(p));
  }
  return rc;
}
