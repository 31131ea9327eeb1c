#include "langcc/ast.hpp"

#include <stdexcept>

#include "langcc/compiled.hpp"
#include "langcc/text.hpp"

namespace langcc {

const Node* Node::field(std::string_view name) const {
  for (const auto& [n, v] : fields)
    if (n == name) return v.get();
  return nullptr;
}

namespace {

void render(const Node& n, std::string& out) {
  switch (n.kind) {
    case Node::Kind::Record:
      out += n.path;
      if (n.fields.empty()) return;
      out += "{";
      for (std::size_t i = 0; i < n.fields.size(); i++) {
        if (i) out += ", ";
        out += n.fields[i].first + ": ";
        render(*n.fields[i].second, out);
      }
      out += "}";
      return;
    case Node::Kind::Token:
      out += "\"" + escape_quoted(n.text) + "\"";
      return;
    case Node::Kind::Seq:
      out += "[";
      for (std::size_t i = 0; i < n.items.size(); i++) {
        if (i) out += ", ";
        render(*n.items[i], out);
      }
      out += "]";
      return;
    case Node::Kind::Option:
      if (n.items.empty()) {
        out += "None";
      } else {
        out += "Some(";
        render(*n.items[0], out);
        out += ")";
      }
      return;
    case Node::Kind::Bool:
      out += n.flag ? "true" : "false";
      return;
  }
}

bool path_has_prefix(std::string_view path, std::string_view prefix) {
  if (path.substr(0, prefix.size()) != prefix) return false;
  return path.size() == prefix.size() || path.substr(prefix.size(), 2) == "::";
}

}  // namespace

std::string debug_render(const Node& n) {
  std::string out;
  render(n, out);
  return out;
}

bool structurally_equal(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Node::Kind::Record:
      if (a.path != b.path || a.fields.size() != b.fields.size()) return false;
      for (std::size_t i = 0; i < a.fields.size(); i++)
        if (a.fields[i].first != b.fields[i].first ||
            !structurally_equal(*a.fields[i].second, *b.fields[i].second))
          return false;
      return true;
    case Node::Kind::Token:
      return a.text == b.text && a.token == b.token;
    case Node::Kind::Seq:
    case Node::Kind::Option:
      if (a.items.size() != b.items.size() || (a.kind == Node::Kind::Seq && a.flag != b.flag)) return false;
      for (std::size_t i = 0; i < a.items.size(); i++)
        if (!structurally_equal(*a.items[i], *b.items[i])) return false;
      return true;
    case Node::Kind::Bool:
      return a.flag == b.flag;
  }
  return false;
}

NodePtr node_downcast(const CompiledLang& lang, const NodePtr& n, std::string_view path) {
  std::string p = data::normalize_path(path);
  if (!lang.grammar.schema.resolve_path(p)) throw std::invalid_argument("unknown variant path `" + p + "`");
  if (n && n->kind == Node::Kind::Record && path_has_prefix(n->path, p)) return n;
  return nullptr;
}

data::DataValue to_data_value(const Node& n) {
  switch (n.kind) {
    case Node::Kind::Record: {
      std::vector<std::pair<std::string, data::DataValue>> fs;
      for (const auto& [name, v] : n.fields) fs.emplace_back(name, to_data_value(*v));
      return data::DataValue::record(n.path, std::move(fs));
    }
    case Node::Kind::Token:
      return data::DataValue::string(n.text);
    case Node::Kind::Seq: {
      std::vector<data::DataValue> xs;
      for (const auto& x : n.items) xs.push_back(to_data_value(*x));
      return data::DataValue::seq(std::move(xs));
    }
    case Node::Kind::Option:
      return n.items.empty() ? data::DataValue::none() : data::DataValue::some(to_data_value(*n.items[0]));
    case Node::Kind::Bool:
      return data::DataValue::boolean(n.flag);
  }
  return data::DataValue::boolean(false);
}

}  // namespace langcc
