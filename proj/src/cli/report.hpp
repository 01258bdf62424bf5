#pragma once
// Report building blocks: threshold checks echoed with their limits, JSON
// output, and CSV field dumps (header x1,...,xn,value; row-major order).

#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "ahlfors/fields.hpp"
#include "json.hpp"

namespace ahlfors::cli {

using Json = nlohmann::ordered_json;

struct Check {
  enum class Kind { AtMost, AtLeast };
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  Kind kind = Kind::AtMost;
  std::string note;

  bool pass() const;
};

Check at_most(std::string name, double value, double threshold, std::string note = {});
Check at_least(std::string name, double value, double threshold, std::string note = {});

Json to_json(const Check& c);
Json to_json(const std::vector<Check>& checks);
bool all_pass(const std::vector<Check>& checks);

// Fields to dump, keyed by file stem.
using FieldDump = std::map<std::string, ScalarField>;

void add_components(FieldDump& out, const std::string& stem, const OneForm& t);
void add_components(FieldDump& out, const std::string& stem, const VectorField& t);
void add_components(FieldDump& out, const std::string& stem, const SymTensor2& t);

void write_csv(const std::filesystem::path& path, const ScalarField& f);
// Creates dir if needed; one <stem>.csv per entry.
void write_dumps(const std::filesystem::path& dir, const FieldDump& fields);

void write_json(std::ostream& out, const Json& j);

}  // namespace ahlfors::cli
