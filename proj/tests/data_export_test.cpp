#include <gtest/gtest.h>
#include <sqlite3.h>

#include <fstream>

#include "prmgen/data_export.hpp"
#include "test_support.hpp"

namespace prmgen {
namespace {

struct Generated {
  Prm prm;
  Dataset data;
};

Generated generate(std::uint64_t seed, std::size_t n, std::size_t objects) {
  Rng rng(seed);
  const RelationalSchema schema = generate_schema(n, {}, rng);
  const auto s = assign_slot_chains(schema, generate_dependency_structure(schema, {}, rng), 3, rng);
  Prm prm = generate_cpds(schema, s, effective_k_max(schema, 3), 1.0, rng);
  const auto sk = generate_skeleton(schema, {1.0, objects}, rng);
  Dataset data = forward_sample(ground(prm, sk), rng);
  return {std::move(prm), std::move(data)};
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag)
      : path_(std::filesystem::temp_directory_path() / ("prmgen_" + tag + "_" + std::to_string(::getpid()))) {
    std::filesystem::remove_all(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Loads the script into an in-memory database with foreign keys enforced and
// returns the row count of every class table.
std::vector<long long> load_and_count(const RelationalSchema& schema, const std::string& sql) {
  sqlite3* db = nullptr;
  EXPECT_EQ(sqlite3_open(":memory:", &db), SQLITE_OK);
  char* err = nullptr;
  std::string script = "PRAGMA foreign_keys = ON; BEGIN;\n" + sql + "COMMIT;";
  const int rc = sqlite3_exec(db, script.c_str(), nullptr, nullptr, &err);
  EXPECT_EQ(rc, SQLITE_OK) << (err ? err : "");
  sqlite3_free(err);
  std::vector<long long> counts;
  for (const auto& cls : schema.classes) {
    sqlite3_stmt* stmt = nullptr;
    const std::string q = "SELECT COUNT(*) FROM " + cls.name;
    EXPECT_EQ(sqlite3_prepare_v2(db, q.c_str(), -1, &stmt, nullptr), SQLITE_OK);
    EXPECT_EQ(sqlite3_step(stmt), SQLITE_ROW);
    counts.push_back(sqlite3_column_int64(stmt, 0));
    sqlite3_finalize(stmt);
  }
  sqlite3_stmt* check = nullptr;
  sqlite3_prepare_v2(db, "PRAGMA foreign_key_check", -1, &check, nullptr);
  EXPECT_EQ(sqlite3_step(check), SQLITE_DONE);
  sqlite3_finalize(check);
  sqlite3_close(db);
  return counts;
}

TEST(TableOrder, TargetsFirst) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const RelationalSchema schema = generate_schema(1 + seed % 7, {}, rng);
    const auto order = table_order(schema);
    std::vector<std::size_t> pos(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
    for (const auto& slot : schema.slots) EXPECT_LT(pos[slot.referenced_class], pos[slot.owner_class]);
  }
}

TEST(EmitSql, ToyForeignKeyClause) {
  std::vector<ClassDef> classes;
  for (std::size_t i = 0; i < 3; ++i) classes.push_back({class_name(i), primary_key_name(i), {make_attribute("att0", 2)}, {}});
  const RelationalSchema schema = assemble_schema(classes, {{foreign_key_name(2, 1), 2, 1}, {foreign_key_name(1, 0), 1, 0}});
  Dataset empty;
  empty.tables = {{0, {}, {{}}}, {0, {{}}, {{}}}, {0, {{}}, {{}}}};
  const std::string sql = emit_sql(schema, empty);
  const auto c1 = sql.find("CREATE TABLE clazz1 (clazz1id INTEGER PRIMARY KEY");
  const auto c2 = sql.find("CREATE TABLE clazz2 (");
  ASSERT_NE(c1, std::string::npos);
  ASSERT_NE(c2, std::string::npos);
  EXPECT_LT(c1, c2);
  EXPECT_NE(sql.find("clazz1fkatt12 INTEGER NOT NULL REFERENCES clazz1(clazz1id)", c2), std::string::npos);
  EXPECT_EQ(sql.find("INSERT"), std::string::npos);
}

TEST(EmitSql, LoadsWithMatchingCounts) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = generate(seed, 2 + seed % 5, 300);
    const auto counts = load_and_count(g.prm.schema, emit_sql(g.prm.schema, g.data));
    for (std::size_t c = 0; c < counts.size(); ++c) {
      EXPECT_EQ(static_cast<std::size_t>(counts[c]), g.data.tables[c].row_count);
    }
  }
}

TEST(EmitSql, StateLabelsAsText) {
  const auto g = generate(3, 2, 20);
  const std::string sql = emit_sql(g.prm.schema, g.data);
  EXPECT_NE(sql.find("'v0'"), std::string::npos);
}

TEST(EmitCsv, FilesAndRoundTrip) {
  const auto g = generate(4, 4, 400);
  TempDir dir("csv");
  const auto paths = emit_csv(g.prm.schema, g.data, dir.path());
  ASSERT_EQ(paths.size(), 4u);
  for (std::size_t c = 0; c < 4; ++c) {
    EXPECT_EQ(paths[c].filename(), g.prm.schema.classes[c].name + ".csv");
    std::ifstream in(paths[c], std::ios::binary);
    const std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    EXPECT_EQ(static_cast<std::size_t>(std::count(content.begin(), content.end(), '\n')),
              g.data.tables[c].row_count + 1);
    EXPECT_EQ(content.find('\r'), std::string::npos);
    EXPECT_EQ(content.rfind(g.prm.schema.classes[c].primary_key, 0), 0u);
  }
  EXPECT_EQ(load_csv_dataset(g.prm.schema, dir.path()), g.data);
}

TEST(EmitCsv, UnwritableDirectoryNamesPath) {
  const auto g = generate(5, 2, 10);
  TempDir dir("blocked");
  std::filesystem::create_directories(dir.path());
  const auto blocker = dir.path() / "file";
  std::ofstream(blocker) << "x";
  try {
    emit_csv(g.prm.schema, g.data, blocker / "sub");
    FAIL() << "no error";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("file"), std::string::npos);
  }
}

TEST(LoadCsv, MissingFile) {
  const auto g = generate(6, 2, 10);
  TempDir dir("missing");
  EXPECT_THROW(load_csv_dataset(g.prm.schema, dir.path()), IoError);
}

}  // namespace
}  // namespace prmgen
