#include "tierlab/geo.hpp"

#include <algorithm>
#include <sstream>

#include "tierlab/errors.hpp"
#include "tierlab/io_util.hpp"

namespace tierlab {

const char* level_name(Level l) {
  switch (l) {
    case Level::Tract: return "tract";
    case Level::Province: return "province";
    case Level::Region: return "region";
    case Level::Country: return "country";
  }
  return "?";
}

Level parse_level(const std::string& s) {
  if (s == "tract") return Level::Tract;
  if (s == "province") return Level::Province;
  if (s == "region") return Level::Region;
  if (s == "country") return Level::Country;
  throw BadFile("unknown level '" + s + "'");
}

GeoHierarchy GeoHierarchy::load(const std::string& path) {
  std::istringstream in(slurp(path));
  std::string line;
  std::size_t line_no = 0;
  if (!read_header(in, line, line_no) || split_csv(line) !=
      std::vector<std::string>{"code", "level", "parent"})
    throw HeaderMismatch("area registry " + path +
                         ": expected header code,level,parent");
  std::vector<std::array<std::string, 3>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty() || trim(line)[0] == '#') continue;
    auto f = split_csv(line);
    if (f.size() != 3)
      throw BadFile(path + ":" + std::to_string(line_no) +
                    ": expected 3 fields");
    rows.push_back({f[0], f[1], f[2]});
  }
  return from_rows(rows);
}

GeoHierarchy GeoHierarchy::from_rows(
    const std::vector<std::array<std::string, 3>>& rows) {
  GeoHierarchy h;
  int order = 0;
  for (const auto& r : rows) {
    if (r[0] == kExternalArea)
      throw BadFile("area code EXT is reserved for cross-border records");
    if (h.nodes_.count(r[0]))
      throw BadFile("duplicate area code " + r[0]);
    h.nodes_[r[0]] = Node{parse_level(r[1]), r[2], order++};
  }
  h.validate();
  return h;
}

void GeoHierarchy::validate() {
  std::string root;
  for (const auto& [code, node] : nodes_) {
    if (node.level == Level::Country) {
      if (!node.parent.empty())
        throw BadFile("country area " + code + " must have no parent");
      if (!root.empty())
        throw BadFile("two country roots: " + root + " and " + code);
      root = code;
      continue;
    }
    if (node.parent.empty())
      throw BadFile("area " + code + " has no parent");
    const auto it = nodes_.find(node.parent);
    if (it == nodes_.end())
      throw UnknownArea("parent " + node.parent + " of " + code +
                        " is not in the registry");
    if (static_cast<int>(it->second.level) != static_cast<int>(node.level) + 1)
      throw BadFile("parent of " + code + " must sit one level up, " +
                    node.parent + " is " + level_name(it->second.level));
  }
  if (root.empty()) throw BadFile("registry has no country root");
  country_ = root;
  // Parent levels strictly increase, so any walk terminates at the root;
  // still guard against corruption with a step bound.
  for (const auto& [code, node] : nodes_) {
    std::string cur = code;
    int steps = 0;
    while (true) {
      const Node& n = nodes_.at(cur);
      if (n.parent.empty()) break;
      cur = n.parent;
      if (++steps > 4) throw CycleDetected("parent chain from " + code +
                                           " does not reach the root");
    }
  }
}

Level GeoHierarchy::level_of(const std::string& code) const {
  const auto it = nodes_.find(code);
  if (it == nodes_.end()) throw UnknownArea("unknown area " + code);
  return it->second.level;
}

std::optional<std::string> GeoHierarchy::parent(const std::string& code) const {
  const auto it = nodes_.find(code);
  if (it == nodes_.end()) throw UnknownArea("unknown area " + code);
  if (it->second.parent.empty()) return std::nullopt;
  return it->second.parent;
}

std::string GeoHierarchy::lift(const std::string& code, Level level) const {
  const auto it = nodes_.find(code);
  if (it == nodes_.end()) throw UnknownArea("unknown area " + code);
  if (static_cast<int>(it->second.level) > static_cast<int>(level))
    throw LevelMismatch("cannot lift " + code + " (" +
                        level_name(it->second.level) + ") down to " +
                        level_name(level));
  std::string cur = code;
  while (nodes_.at(cur).level != level) cur = nodes_.at(cur).parent;
  return cur;
}

std::vector<std::string> GeoHierarchy::at_level(Level level) const {
  std::vector<std::pair<int, std::string>> found;
  for (const auto& [code, node] : nodes_)
    if (node.level == level) found.emplace_back(node.order, code);
  std::sort(found.begin(), found.end());
  std::vector<std::string> out;
  out.reserve(found.size());
  for (auto& [_, code] : found) out.push_back(code);
  return out;
}

std::vector<std::string> GeoHierarchy::children(const std::string& code) const {
  if (!nodes_.count(code)) throw UnknownArea("unknown area " + code);
  std::vector<std::pair<int, std::string>> found;
  for (const auto& [c, node] : nodes_)
    if (node.parent == code) found.emplace_back(node.order, c);
  std::sort(found.begin(), found.end());
  std::vector<std::string> out;
  out.reserve(found.size());
  for (auto& [_, c] : found) out.push_back(c);
  return out;
}

}  // namespace tierlab
