#include "rem/serialize.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rem/error.hpp"

namespace rem {

using nlohmann::json;

auto dump_egraph(const EGraph &egraph) -> std::string {
  json nodes = json::array();
  for (const auto &node : egraph.creation_log()) {
    json children = json::array();
    for (auto c : node.children) children.push_back(c.value);
    nodes.push_back(json::array({egraph.symbols().name(node.symbol), std::move(children)}));
  }
  json unions = json::array();
  for (std::uint32_t i = 0; i < egraph.num_ids(); ++i) {
    auto root = egraph.find(EClassId{i});
    if (root.value != i) unions.push_back(json::array({i, root.value}));
  }
  return json{{"nodes", std::move(nodes)}, {"unions", std::move(unions)}}.dump();
}

auto parse_egraph(std::string_view json_text) -> EGraph {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error &e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), e.byte == 0 ? 0 : e.byte - 1);
  }
  auto fail = [](const std::string &what) -> void { throw ParseError("e-graph JSON: " + what, 0); };
  if (!doc.is_object() || !doc.contains("nodes") || !doc["nodes"].is_array()) fail("expected an object with \"nodes\"");
  if (doc.contains("unions") && !doc["unions"].is_array()) fail("\"unions\" must be an array");

  EGraph eg;
  std::vector<EClassId> ids;
  const auto &nodes = doc["nodes"];
  ids.reserve(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const auto &n = nodes[k];
    if (!n.is_array() || n.size() != 2 || !n[0].is_string() || !n[1].is_array()) {
      fail("node " + std::to_string(k) + " must be [symbol, [child-ids]]");
    }
    std::vector<EClassId> children;
    for (const auto &c : n[1]) {
      if (!c.is_number_unsigned() || c.get<std::uint64_t>() >= k) {
        fail("node " + std::to_string(k) + " refers to a child that is not an earlier node");
      }
      children.push_back(ids[c.get<std::size_t>()]);
    }
    auto symbol = n[0].get<std::string>();
    eg.intern(symbol, children.size());
    ids.push_back(eg.add(symbol, std::move(children)));
  }
  if (doc.contains("unions")) {
    for (const auto &u : doc["unions"]) {
      if (!u.is_array() || u.size() != 2 || !u[0].is_number_unsigned() || !u[1].is_number_unsigned() ||
          u[0].get<std::uint64_t>() >= ids.size() || u[1].get<std::uint64_t>() >= ids.size()) {
        fail("each union must be a pair of node indices");
      }
      eg.merge(ids[u[0].get<std::size_t>()], ids[u[1].get<std::size_t>()]);
    }
  }
  eg.rebuild();
  return eg;
}

auto read_file(const std::filesystem::path &path) -> std::string {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path &path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << contents;
  if (!out) throw Error("error writing " + path.string());
}

auto load_egraph(const std::filesystem::path &path) -> EGraph { return parse_egraph(read_file(path)); }

void save_egraph(const std::filesystem::path &path, const EGraph &egraph) { write_file(path, dump_egraph(egraph)); }

}  // namespace rem
