#pragma once

#include <string>
#include <variant>

#include "json.hpp"
#include "ssq/filtered.hpp"

namespace ssq {

using Json = nlohmann::json;

// Schema violation; path is a JSON path such as $.pages[1].d[0].matrix.
struct SchemaError : Error {
  SchemaError(const std::string& path, const std::string& what) : Error(path + ": " + what), path(path) {}
  std::string path;
};

using Object = std::variant<RComplex, ExtSpecSeq, WitnessBook, FilteredComplex, ESSMap, WBMap>;

std::string kind_of(const Object& o);
Field field_of(const Object& o);

// {"field": ..., "kind": ..., payload}.  Scalars are decimal strings ("a/b"
// over Q), matrices are row-major lists of rows, blocks are keyed by source bidegree.
Json serialize(const Object& o);
Object parse(const Json& j);
Object read_object(const std::string& path);
void write_object(const std::string& path, const Object& o);

Json field_json(Field f);
Field parse_field(const Json& j, const std::string& path = "$.field");
Json matrix_json(const Matrix& m);
Matrix parse_matrix(const Json& j, Field f, std::size_t rows, std::size_t cols, const std::string& path);

}  // namespace ssq
