#include "omq/term.hpp"

#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace omq {
namespace {

struct Interner {
  std::shared_mutex mutex;
  std::deque<std::string> names;
  std::unordered_map<std::string_view, std::uint32_t> ids;
};

Interner& interner() {
  static Interner instance;
  return instance;
}

}  // namespace

std::uint32_t SymbolTable::intern(std::string_view name) {
  Interner& in = interner();
  {
    std::shared_lock lock(in.mutex);
    if (auto it = in.ids.find(name); it != in.ids.end()) return it->second;
  }
  std::unique_lock lock(in.mutex);
  if (auto it = in.ids.find(name); it != in.ids.end()) return it->second;
  const auto id = static_cast<std::uint32_t>(in.names.size());
  in.names.emplace_back(name);
  in.ids.emplace(in.names.back(), id);
  return id;
}

std::string_view SymbolTable::name(std::uint32_t id) {
  Interner& in = interner();
  std::shared_lock lock(in.mutex);
  return in.names.at(id);
}

std::string Term::to_string() const {
  if (is_null()) return "_:" + std::to_string(id_);
  return std::string(name());
}

bool name_less(const Term& a, const Term& b) {
  if (a.kind() != b.kind()) return a.kind() < b.kind();
  if (a.is_null()) return a.null_id() < b.null_id();
  return a.name() < b.name();
}

}  // namespace omq
