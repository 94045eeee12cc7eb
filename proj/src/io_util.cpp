#include "tierlab/io_util.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <sstream>

#include "tierlab/errors.hpp"

namespace tierlab {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

bool read_header(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (!t.empty() && t[0] != '#') return true;
  }
  return false;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw BadFile("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string s = ss.str();
  std::string norm;
  norm.reserve(s.size());
  for (char c : s)
    if (c != '\r') norm.push_back(c);
  return norm;
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw BadFile("cannot write " + tmp);
    out << content;
    out.flush();
    if (!out) throw BadFile("short write to " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw BadFile("cannot rename " + tmp + " to " + path + ": " +
                        ec.message());
}

std::string resolve_data_path(const std::string& name) {
  if (name.find('/') != std::string::npos || name.find('\\') != std::string::npos)
    return name;
  if (std::filesystem::exists(name)) return name;
  const char* dir = std::getenv("TIERLAB_DATA_DIR");
  const std::string base = dir && *dir ? dir : "data";
  return base + "/" + name;
}

}  // namespace tierlab
