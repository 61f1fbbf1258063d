#include "specmc/machine_state.hpp"

#include <algorithm>

namespace specmc {

AddressMap AddressMap::build(const std::vector<GlobalDecl>& decls) {
  AddressMap m;
  Addr next = 0;
  for (const auto& d : decls) {
    if (m.entries_.count(d.name)) {
      throw Diagnostic("duplicate global declaration '" + d.name + "'");
    }
    Entry e;
    if (d.is_alias) {
      auto base = m.entries_.find(d.alias_base);
      if (base == m.entries_.end() || !base->second.is_array) {
        throw Diagnostic("alias '" + d.name + "' refers to unknown array '" +
                         d.alias_base + "'");
      }
      e.base = base->second.base + d.alias_index;
      if (e.base < 0) {
        throw Diagnostic("alias '" + d.name + "' has a negative address");
      }
      e.size = 1;
      e.is_array = false;
      next = std::max(next, e.base + 1);
    } else {
      e.base = next;
      e.size = d.size;
      e.is_array = d.is_array;
      next += d.size;
    }
    m.entries_.emplace(d.name, e);
    m.order_.push_back(d.name);
  }
  m.image_size_ = next;
  return m;
}

bool AddressMap::is_global(const std::string& name) const {
  return entries_.count(name) != 0;
}

bool AddressMap::is_array(const std::string& name) const {
  auto it = entries_.find(name);
  return it != entries_.end() && it->second.is_array;
}

Value AddressMap::length(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) {
    throw Diagnostic("undeclared global '" + name + "'");
  }
  return it->second.size;
}

Addr AddressMap::addr_of(const std::string& name,
                         std::optional<Value> index) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) {
    throw Diagnostic("undeclared global '" + name + "'");
  }
  const Entry& e = it->second;
  if (e.is_array != index.has_value()) {
    throw Diagnostic(e.is_array ? "array '" + name + "' used without an index"
                                : "scalar '" + name + "' used with an index");
  }
  Addr a = e.base + (index ? *index : 0);
  if (a < 0 || a >= image_size_) {
    throw Diagnostic("address of " + name +
                     (index ? "[" + std::to_string(*index) + "]" : "") +
                     " lies outside the memory image");
  }
  return a;
}

Addr AddressMap::addr_of(const LocKey& loc) const {
  return addr_of(loc.name, loc.index);
}

std::string AddressMap::name_of(Addr a) const {
  // Prefer a scalar covering the address, then an array element.
  for (const auto& name : order_) {
    const Entry& e = entries_.at(name);
    if (!e.is_array && e.base == a) return name;
  }
  for (const auto& name : order_) {
    const Entry& e = entries_.at(name);
    if (e.is_array && a >= e.base && a < e.base + e.size) {
      return name + "[" + std::to_string(a - e.base) + "]";
    }
  }
  return "@" + std::to_string(a);
}

std::size_t MemoryImage::hash() const {
  std::size_t h = 41;
  for (Value v : data) h = hash_combine(h, std::hash<Value>{}(v));
  h = hash_combine(h, 43);
  for (Addr a : cache) h = hash_combine(h, std::hash<Addr>{}(a));
  return h;
}

MemoryImage MemoryImage::with_store(Addr a, Value v) const {
  MemoryImage out = *this;
  out.data.at(static_cast<std::size_t>(a)) = v;
  return out;
}

MemoryImage initial_image(const std::vector<GlobalDecl>& decls,
                          const AddressMap& amap) {
  MemoryImage img;
  img.data.assign(static_cast<std::size_t>(amap.image_size()), 0);
  for (const auto& d : decls) {
    for (Value i = 0; i < static_cast<Value>(d.init.size()); ++i) {
      Addr a = amap.addr_of(d.name, d.is_array ? std::optional<Value>(i)
                                               : std::nullopt);
      img.data.at(static_cast<std::size_t>(a)) = d.init[i];
    }
  }
  return img;
}

MemoryImage cache_fetch(const MemoryImage& img, Addr a) {
  MemoryImage out = img;
  auto it = std::lower_bound(out.cache.begin(), out.cache.end(), a);
  if (it == out.cache.end() || *it != a) out.cache.insert(it, a);
  return out;
}

MemoryImage cache_flush(const MemoryImage& img) {
  MemoryImage out = img;
  out.cache.clear();
  return out;
}

bool cache_query(const MemoryImage& img, Addr a) {
  return std::binary_search(img.cache.begin(), img.cache.end(), a);
}

}  // namespace specmc
