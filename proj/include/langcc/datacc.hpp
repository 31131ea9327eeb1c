#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "langcc/diagnostic.hpp"
#include "langcc/sha256.hpp"

namespace langcc::data {

struct TypeExpr {
  enum class Kind { Integer, String, Boolean, Seq, Option, Named, Param };
  Kind kind = Kind::Integer;
  std::string name;  // Named / Param
  std::vector<TypeExpr> args;

  static TypeExpr integer() { return {Kind::Integer, {}, {}}; }
  static TypeExpr string() { return {Kind::String, {}, {}}; }
  static TypeExpr boolean() { return {Kind::Boolean, {}, {}}; }
  static TypeExpr seq(TypeExpr t) { return {Kind::Seq, {}, {std::move(t)}}; }
  static TypeExpr option(TypeExpr t) { return {Kind::Option, {}, {std::move(t)}}; }
  static TypeExpr named(std::string n, std::vector<TypeExpr> a = {}) {
    return {Kind::Named, std::move(n), std::move(a)};
  }
  static TypeExpr param(std::string n) { return {Kind::Param, std::move(n), {}}; }

  std::string render() const;
  friend bool operator==(const TypeExpr&, const TypeExpr&) = default;
};

struct Field {
  std::string name;
  TypeExpr type;
  friend bool operator==(const Field&, const Field&) = default;
};

/// A product (ordered fields) or a sum (ordered named cases, each itself a
/// TypeDef). Enums are sums whose cases are all empty products.
struct TypeDef {
  enum class Kind { Product, Sum };
  std::string name;
  Kind kind = Kind::Product;
  std::vector<Field> fields;
  std::vector<TypeDef> cases;
  SourceLoc loc;

  bool is_enum() const;
  const Field* field(std::string_view n) const;
  const TypeDef* case_named(std::string_view n) const;
  friend bool operator==(const TypeDef&, const TypeDef&) = default;
};

struct DataDecl {
  std::vector<std::string> params;
  TypeDef def;  // def.name is the type name
  friend bool operator==(const DataDecl&, const DataDecl&) = default;
};

class DatatypeSchema {
 public:
  std::vector<DataDecl> decls;

  const DataDecl* find(std::string_view name) const;
  /// Resolves `A::B::C` (or `A.B.C`) to the nested TypeDef, or nullptr.
  const TypeDef* resolve_path(std::string_view path) const;
  /// Checks name resolution, arity, duplicate names. Empty on success.
  std::vector<Diagnostic> validate() const;

  friend bool operator==(const DatatypeSchema&, const DatatypeSchema&) = default;
};

/// `A.B.C` -> `A::B::C`.
std::string normalize_path(std::string_view path);

DatatypeSchema parse_data_spec(std::string_view source);
std::string render_schema(const DatatypeSchema& schema);

class DataValue;

namespace detail {

struct ValueNode {
  enum class Kind { Integer, String, Boolean, Seq, None, Some, Record };
  Kind kind = Kind::Integer;
  std::int64_t i = 0;
  bool b = false;
  std::string s;  // string payload, or record path
  std::vector<DataValue> items;  // seq items, Some payload
  std::vector<std::pair<std::string, DataValue>> fields;

  mutable std::once_flag hash_once;
  mutable Digest hash{};
};

}  // namespace detail

/// Immutable, structurally shared value. Copies share the underlying node.
class DataValue {
 public:
  using Kind = detail::ValueNode::Kind;

  static DataValue integer(std::int64_t v);
  static DataValue string(std::string v);
  static DataValue boolean(bool v);
  static DataValue seq(std::vector<DataValue> items);
  static DataValue none();
  static DataValue some(DataValue v);
  /// Record of a product type or a sum case; fields in declaration order.
  static DataValue record(std::string path, std::vector<std::pair<std::string, DataValue>> fields);

  Kind kind() const { return node_->kind; }
  std::int64_t as_integer() const { return node_->i; }
  bool as_boolean() const { return node_->b; }
  const std::string& as_string() const { return node_->s; }
  const std::string& path() const { return node_->s; }
  const std::vector<DataValue>& items() const { return node_->items; }
  const std::vector<std::pair<std::string, DataValue>>& fields() const { return node_->fields; }
  const DataValue* field(std::string_view name) const;

  /// True iff both handles share one node (no structural comparison).
  bool same_node(const DataValue& o) const { return node_ == o.node_; }

  friend bool operator==(const DataValue& a, const DataValue& b);

 private:
  explicit DataValue(std::shared_ptr<const detail::ValueNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const detail::ValueNode> node_;

  friend Digest value_hash(const DataValue& v);
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Checks that `v` conforms to `type` under `schema`; returns an error
/// message describing the first mismatch.
std::optional<std::string> validate_value(const DatatypeSchema& schema, const DataValue& v,
                                          const TypeExpr& type);

/// Builds a record for `path`, placing the given fields in schema order and
/// validating field types (type parameters are not instantiated here, so
/// parameter-typed fields accept any value).
DataValue construct(const DatatypeSchema& schema, std::string_view path,
                    std::vector<std::pair<std::string, DataValue>> fields);

/// `is`/`as` for sum cases: present iff v's path has `case_path` as a
/// component prefix. Throws DataError if the case path is undeclared.
std::optional<DataValue> downcast(const DatatypeSchema& schema, const DataValue& v,
                                  std::string_view case_path);
bool is_case(const DatatypeSchema& schema, const DataValue& v, std::string_view case_path);

/// Returns a copy of `v` with `field` replaced; throws DataError on an unknown
/// field or a type mismatch.
DataValue substitute_field(const DatatypeSchema& schema, const DataValue& v,
                           std::string_view field, DataValue replacement);

std::string debug_print(const DataValue& v);

/// SHA-256 over the canonical serialization. Memoized per node.
Digest value_hash(const DataValue& v);

/// Number of node digests computed (not served from the memo) so far.
std::uint64_t hash_computations();

}  // namespace langcc::data
