#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace ahlfors::cli {

bool Check::pass() const {
  if (!std::isfinite(value)) return false;
  return kind == Kind::AtMost ? value <= threshold : value >= threshold;
}

Check at_most(std::string name, double value, double threshold, std::string note) {
  return {std::move(name), value, threshold, Check::Kind::AtMost, std::move(note)};
}

Check at_least(std::string name, double value, double threshold, std::string note) {
  return {std::move(name), value, threshold, Check::Kind::AtLeast, std::move(note)};
}

Json to_json(const Check& c) {
  Json j;
  j["name"] = c.name;
  j["value"] = c.value;
  j["threshold"] = c.threshold;
  j["comparison"] = c.kind == Check::Kind::AtMost ? "<=" : ">=";
  j["pass"] = c.pass();
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

Json to_json(const std::vector<Check>& checks) {
  Json arr = Json::array();
  for (const auto& c : checks) arr.push_back(to_json(c));
  return arr;
}

bool all_pass(const std::vector<Check>& checks) {
  for (const auto& c : checks)
    if (!c.pass()) return false;
  return true;
}

void add_components(FieldDump& out, const std::string& stem, const OneForm& t) {
  for (int a = 0; a < t.dim(); ++a) out.emplace(stem + "_" + std::to_string(a + 1), t[a]);
}

void add_components(FieldDump& out, const std::string& stem, const VectorField& t) {
  for (int a = 0; a < t.dim(); ++a) out.emplace(stem + "_" + std::to_string(a + 1), t[a]);
}

void add_components(FieldDump& out, const std::string& stem, const SymTensor2& t) {
  for (int a = 0; a < t.dim(); ++a)
    for (int b = a; b < t.dim(); ++b)
      out.emplace(stem + "_" + std::to_string(a + 1) + std::to_string(b + 1), t(a, b));
}

void write_csv(const std::filesystem::path& path, const ScalarField& f) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) throw std::runtime_error("cannot write " + path.string());
  const Grid& g = *f.grid();
  const int n = g.dim();
  for (int a = 0; a < n; ++a) std::fprintf(fp, "x%d,", a + 1);
  std::fprintf(fp, "value\n");
  std::vector<double> x(n);
  for (std::size_t p = 0; p < g.size(); ++p) {
    g.coordinates(p, x);
    for (int a = 0; a < n; ++a) std::fprintf(fp, "%.17g,", x[a]);
    std::fprintf(fp, "%.17g\n", f[p]);
  }
  if (std::fclose(fp) != 0) throw std::runtime_error("cannot write " + path.string());
}

void write_dumps(const std::filesystem::path& dir, const FieldDump& fields) {
  std::filesystem::create_directories(dir);
  for (const auto& [stem, f] : fields) write_csv(dir / (stem + ".csv"), f);
}

void write_json(std::ostream& out, const Json& j) {
  out << j.dump(2) << '\n';
}

}  // namespace ahlfors::cli
