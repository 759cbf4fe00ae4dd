// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "sgg/scene_graph.hpp"

namespace sgg::test {

inline std::string read_fixture(const std::string& name) {
  const std::string path = std::string(SGG_FIXTURE_DIR) + "/" + name;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline PropertyGraph load_fixture_graph(const std::string& name) {
  return load_graph(read_fixture(name));
}

inline NodeSymbol sym(const std::string& text) {
  auto parsed = NodeSymbol::parse(text);
  if (!parsed) throw std::runtime_error("bad symbol: " + text);
  return *parsed;
}

}  // namespace sgg::test
