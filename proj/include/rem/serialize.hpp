#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "rem/egraph.hpp"

namespace rem {

/**
 * {"nodes": [[symbol, [child-ids]], ...], "unions": [[id, id], ...]}
 *
 * Node k of the list creates id k (child ids refer to earlier nodes). Loading
 * adds every node, then applies the unions, then rebuilds.
 */
auto dump_egraph(const EGraph &egraph) -> std::string;

/// Throws ParseError on malformed JSON or schema violations, ArityError on
/// inconsistent symbol use.
auto parse_egraph(std::string_view json_text) -> EGraph;

auto read_file(const std::filesystem::path &path) -> std::string;
void write_file(const std::filesystem::path &path, std::string_view contents);

auto load_egraph(const std::filesystem::path &path) -> EGraph;
void save_egraph(const std::filesystem::path &path, const EGraph &egraph);

}  // namespace rem
