#pragma once

#include <array>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace tierlab {

enum class Level { Tract = 0, Province = 1, Region = 2, Country = 3 };

const char* level_name(Level l);
Level parse_level(const std::string& s);

// Reserved code for the rest of the world. Never part of a hierarchy; ODM
// records may use it as origin or destination for cross-border movements.
inline const std::string kExternalArea = "EXT";

struct AreaId {
  std::string code;
  Level level = Level::Tract;
};

// Containment forest: every area except the single Country root has a parent
// exactly one level coarser. Codes are opaque strings.
class GeoHierarchy {
 public:
  // Registry CSV with header "code,level,parent"; parent empty only on the
  // country row. '#' comment lines allowed. Validates the forest shape.
  static GeoHierarchy load(const std::string& path);
  static GeoHierarchy from_rows(
      const std::vector<std::array<std::string, 3>>& rows);

  bool contains(const std::string& code) const {
    return nodes_.count(code) > 0;
  }
  Level level_of(const std::string& code) const;

  // Parent code, or nullopt for the country root. Throws UnknownArea.
  std::optional<std::string> parent(const std::string& code) const;

  // Ancestor of `code` at `level` (identity when already there). Throws
  // UnknownArea and, when `level` is finer than the area's own, LevelMismatch.
  std::string lift(const std::string& code, Level level) const;

  const std::string& country() const { return country_; }

  // Codes at a given level, registry order.
  std::vector<std::string> at_level(Level level) const;

  // Direct children, registry order.
  std::vector<std::string> children(const std::string& code) const;

 private:
  struct Node {
    Level level;
    std::string parent;  // empty for the root
    int order;           // registry position, for stable listings
  };
  std::unordered_map<std::string, Node> nodes_;
  std::string country_;

  void validate();
};

}  // namespace tierlab
