#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "specmc/expr.hpp"

namespace specmc {

// One global declaration.  Scalars have size 1.  An alias binds a scalar
// name to an address inside (or just past) another array's range, making
// out-of-bounds layouts explicit in the program text.
struct GlobalDecl {
  std::string name;
  bool is_array = false;
  Value size = 1;
  std::vector<Value> init;  // size entries (1 for scalars)
  bool is_alias = false;
  std::string alias_base;
  Value alias_index = 0;
};

// Flat address layout: declarations take contiguous addresses in order,
// arrays elementwise.  addr(A[i]) = addr(A[0]) + i for any i, so
// out-of-bounds indices may alias later declarations.
class AddressMap {
 public:
  static AddressMap build(const std::vector<GlobalDecl>& decls);

  bool is_global(const std::string& name) const;
  bool is_array(const std::string& name) const;
  Value length(const std::string& name) const;

  // Address of a location; throws Diagnostic if the name is undeclared or
  // the computed address lies outside the memory image.
  Addr addr_of(const std::string& name, std::optional<Value> index) const;
  Addr addr_of(const LocKey& loc) const;

  Addr image_size() const { return image_size_; }

  // Canonical display name for an address (scalar name if one exists,
  // otherwise base[i] of the first array covering it).
  std::string name_of(Addr a) const;

 private:
  struct Entry {
    Addr base = 0;
    Value size = 1;
    bool is_array = false;
  };
  std::map<std::string, Entry> entries_;
  std::vector<std::string> order_;
  Addr image_size_ = 0;
};

// Data memory plus the abstract cache: the set of addresses that have been
// fetched.  No lines, levels or eviction policy; flushing empties the set.
// Value semantics throughout — operations return updated copies.
struct MemoryImage {
  std::vector<Value> data;
  std::vector<Addr> cache;  // sorted, unique

  std::size_t hash() const;
  bool operator==(const MemoryImage& o) const {
    return data == o.data && cache == o.cache;
  }

  MemoryImage with_store(Addr a, Value v) const;
};

MemoryImage initial_image(const std::vector<GlobalDecl>& decls,
                          const AddressMap& amap);

MemoryImage cache_fetch(const MemoryImage& img, Addr a);
MemoryImage cache_flush(const MemoryImage& img);
bool cache_query(const MemoryImage& img, Addr a);

}  // namespace specmc
