#include "rem/database.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>

#include "rem/error.hpp"

namespace rem {

namespace {

auto next_version() -> std::uint64_t {
  static std::atomic<std::uint64_t> counter{0};
  return ++counter;
}

}  // namespace

Relation::Relation(std::string symbol, std::size_t arity, std::vector<EClassId> rows)
    : symbol_(std::move(symbol)), width_(arity + 1) {
  if (rows.size() % width_ != 0) {
    throw ArityError("relation '" + symbol_ + "': " + std::to_string(rows.size()) +
                     " values do not form rows of width " + std::to_string(width_));
  }
  auto n = rows.size() / width_;
  auto less = [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(rows.begin() + static_cast<std::ptrdiff_t>(a * width_),
                                        rows.begin() + static_cast<std::ptrdiff_t>((a + 1) * width_),
                                        rows.begin() + static_cast<std::ptrdiff_t>(b * width_),
                                        rows.begin() + static_cast<std::ptrdiff_t>((b + 1) * width_));
  };
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), less);

  data_.reserve(rows.size());
  std::size_t kept = 0;
  for (auto i : order) {
    auto row = std::span<const EClassId>(rows).subspan(i * width_, width_);
    if (kept > 0 && std::equal(row.begin(), row.end(), data_.end() - static_cast<std::ptrdiff_t>(width_))) continue;
    data_.insert(data_.end(), row.begin(), row.end());
    ++kept;
  }

  // Children -> id: group by columns 1.. and require a single id per group.
  std::vector<std::size_t> by_args(kept);
  std::iota(by_args.begin(), by_args.end(), 0);
  auto args_less = [&](std::size_t a, std::size_t b) {
    auto ra = this->row(a).subspan(1);
    auto rb = this->row(b).subspan(1);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  };
  std::sort(by_args.begin(), by_args.end(), args_less);
  for (std::size_t i = 1; i < by_args.size(); ++i) {
    auto a = row(by_args[i - 1]).subspan(1);
    auto b = row(by_args[i]).subspan(1);
    if (std::equal(a.begin(), a.end(), b.begin(), b.end())) {
      id_dependency_ = false;
      break;
    }
  }
}

Database::Database() : version_(next_version()) {}

void Database::add_relation(Relation relation) {
  auto name = relation.symbol();
  relations_.insert_or_assign(std::move(name), std::move(relation));
  version_ = next_version();
}

void Database::set_classes(std::vector<EClassId> classes) {
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  classes_ = std::move(classes);
  version_ = next_version();
}

auto Database::find(std::string_view symbol) const -> const Relation * {
  auto it = relations_.find(symbol);
  return it == relations_.end() ? nullptr : &it->second;
}

auto Database::relation(std::string_view symbol) const -> const Relation & {
  if (const auto *r = find(symbol)) return *r;
  throw UnknownSymbol(std::string(symbol));
}

auto Database::total_tuples() const -> std::size_t {
  std::size_t total = 0;
  for (const auto &[_, r] : relations_) total += r.size();
  return total;
}

auto egraph_to_database(const EGraph &egraph) -> Database {
  if (!egraph.is_clean()) throw DirtyEGraph("rebuild the e-graph before converting it to a database");

  const auto &symbols = egraph.symbols();
  std::vector<std::vector<EClassId>> rows(symbols.size());
  auto classes = egraph.class_ids();
  for (auto id : classes) {
    for (const auto &node : egraph.nodes(id)) {
      auto &out = rows[node.symbol.value];
      out.push_back(egraph.find(id));
      for (auto child : node.children) out.push_back(egraph.find(child));
    }
  }

  Database db;
  for (std::uint32_t s = 0; s < symbols.size(); ++s) {
    SymbolId sym{s};
    db.add_relation(Relation(symbols.name(sym), symbols.arity(sym), std::move(rows[s])));
  }
  db.set_classes(std::move(classes));
  return db;
}

}  // namespace rem
