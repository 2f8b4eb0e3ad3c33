#include "prmgen/data_export.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "prmgen/dag.hpp"
#include "prmgen/errors.hpp"

namespace prmgen {

std::vector<std::size_t> table_order(const RelationalSchema& schema) {
  // Reverse the owner -> referenced edges so that targets come first.
  std::vector<std::vector<std::size_t>> referrers(schema.class_count());
  for (std::size_t c = 0; c < schema.class_count(); ++c) referrers[c] = schema.class_dag.parents(c);
  return topological_order(std::span<const std::vector<std::size_t>>(referrers));
}

namespace {

std::vector<std::string> column_names(const RelationalSchema& schema, const ClassDef& cls) {
  std::vector<std::string> cols{cls.primary_key};
  for (std::size_t s : cls.reference_slots) cols.push_back(schema.slots[s].name);
  for (const auto& a : cls.attributes) cols.push_back(a.name);
  return cols;
}

std::size_t longest_state(const AttributeDef& a) {
  std::size_t n = 1;
  for (const auto& s : a.states) n = std::max(n, s.size());
  return n;
}

void check_shape(const RelationalSchema& schema, const Dataset& data) {
  if (data.tables.size() != schema.class_count()) {
    throw StructuralError("dataset has " + std::to_string(data.tables.size()) + " tables, schema has " +
                          std::to_string(schema.class_count()) + " classes");
  }
  for (std::size_t c = 0; c < schema.class_count(); ++c) {
    const auto& t = data.tables[c];
    const auto& cls = schema.classes[c];
    if (t.foreign_keys.size() != cls.reference_slots.size() || t.attributes.size() != cls.attributes.size()) {
      throw StructuralError("table " + cls.name + " does not match its class");
    }
  }
}

}  // namespace

std::string emit_sql(const RelationalSchema& schema, const Dataset& data) {
  check_shape(schema, data);
  const auto order = table_order(schema);
  std::ostringstream os;
  for (std::size_t c : order) {
    const auto& cls = schema.classes[c];
    os << "CREATE TABLE " << cls.name << " (" << cls.primary_key << " INTEGER PRIMARY KEY";
    for (std::size_t s : cls.reference_slots) {
      const auto& target = schema.classes[schema.slots[s].referenced_class];
      os << ", " << schema.slots[s].name << " INTEGER NOT NULL REFERENCES " << target.name << "("
         << target.primary_key << ")";
    }
    for (const auto& a : cls.attributes) os << ", " << a.name << " VARCHAR(" << longest_state(a) << ") NOT NULL";
    os << ");\n";
  }
  for (std::size_t c : order) {
    const auto& cls = schema.classes[c];
    const auto& t = data.tables[c];
    if (t.row_count == 0) continue;
    std::string prefix = "INSERT INTO " + cls.name + " (";
    const auto cols = column_names(schema, cls);
    for (std::size_t i = 0; i < cols.size(); ++i) prefix += (i ? ", " : "") + cols[i];
    prefix += ") VALUES (";
    for (std::size_t r = 0; r < t.row_count; ++r) {
      os << prefix << r;
      for (const auto& fk : t.foreign_keys) os << ", " << fk[r];
      for (std::size_t a = 0; a < cls.attributes.size(); ++a) {
        os << ", '" << cls.attributes[a].states[t.attributes[a][r]] << "'";
      }
      os << ");\n";
    }
  }
  return os.str();
}

std::vector<std::filesystem::path> emit_csv(const RelationalSchema& schema, const Dataset& data,
                                            const std::filesystem::path& directory) {
  check_shape(schema, data);
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw IoError(directory.string() + ": " + ec.message());

  std::vector<std::filesystem::path> paths;
  for (std::size_t c = 0; c < schema.class_count(); ++c) {
    const auto& cls = schema.classes[c];
    const auto& t = data.tables[c];
    const auto path = directory / (cls.name + ".csv");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path.string() + ": cannot open for writing");
    const auto cols = column_names(schema, cls);
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
    for (std::size_t r = 0; r < t.row_count; ++r) {
      out << r;
      for (const auto& fk : t.foreign_keys) out << ',' << fk[r];
      for (std::size_t a = 0; a < cls.attributes.size(); ++a) out << ',' << cls.attributes[a].states[t.attributes[a][r]];
      out << '\n';
    }
    out.flush();
    if (!out) throw IoError(path.string() + ": write failed");
    paths.push_back(path);
  }
  return paths;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (comma == std::string::npos) return out;
    start = comma + 1;
  }
}

std::size_t parse_index(const std::string& field, const std::string& where) {
  std::size_t v = 0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw StructuralError(where + ": not an integer: " + field);
  }
  return v;
}

}  // namespace

Dataset load_csv_dataset(const RelationalSchema& schema, const std::filesystem::path& directory) {
  Dataset data;
  for (const auto& cls : schema.classes) {
    const auto path = directory / (cls.name + ".csv");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string() + ": cannot open for reading");
    const auto cols = column_names(schema, cls);
    std::string line;
    if (!std::getline(in, line) || split_fields(line) != cols) {
      throw StructuralError(path.string() + ": header does not match class " + cls.name);
    }
    ClassTable t;
    t.foreign_keys.resize(cls.reference_slots.size());
    t.attributes.resize(cls.attributes.size());
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      const std::string where = path.string() + ":" + std::to_string(line_no);
      const auto fields = split_fields(line);
      if (fields.size() != cols.size()) throw StructuralError(where + ": wrong field count");
      if (parse_index(fields[0], where) != t.row_count) throw StructuralError(where + ": rows out of order");
      std::size_t f = 1;
      for (auto& fk : t.foreign_keys) fk.push_back(parse_index(fields[f++], where));
      for (std::size_t a = 0; a < cls.attributes.size(); ++a, ++f) {
        const auto& states = cls.attributes[a].states;
        const auto it = std::find(states.begin(), states.end(), fields[f]);
        if (it == states.end()) throw StructuralError(where + ": unknown state " + fields[f]);
        t.attributes[a].push_back(static_cast<std::size_t>(it - states.begin()));
      }
      ++t.row_count;
    }
    data.tables.push_back(std::move(t));
  }
  return data;
}

}  // namespace prmgen
