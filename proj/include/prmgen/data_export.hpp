#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "prmgen/gbn.hpp"
#include "prmgen/schema.hpp"

namespace prmgen {

/// Classes ordered so that every referenced class precedes its referrers,
/// ties broken by ascending class index.
std::vector<std::size_t> table_order(const RelationalSchema& schema);

/// Portable SQL script: one CREATE TABLE per class followed by the INSERT
/// statements, both in table_order. Columns are the primary key, the foreign
/// keys, then the attributes, whose values are written as state labels.
std::string emit_sql(const RelationalSchema& schema, const Dataset& data);

/// Writes "<class>.csv" for every class into `directory` (created if needed)
/// and returns the paths in class order. Throws IoError naming the path.
std::vector<std::filesystem::path> emit_csv(const RelationalSchema& schema, const Dataset& data,
                                            const std::filesystem::path& directory);

/// Reads back files written by emit_csv. Throws IoError on missing files and
/// StructuralError on content that does not fit the schema.
Dataset load_csv_dataset(const RelationalSchema& schema, const std::filesystem::path& directory);

}  // namespace prmgen
