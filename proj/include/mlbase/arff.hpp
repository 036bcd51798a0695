#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mlbase/dataset.hpp"
#include "mlbase/error.hpp"
#include "mlbase/text.hpp"

// ARFF reader/writer for multi-label corpora.
//
// Supported grammar: '%' comment lines, @relation, @attribute with
// numeric/real/integer, string, or {nominal} types, and an @data section
// holding dense rows or sparse rows of the form "{index value, ...}".
// Two label conventions are handled on top of that:
//   - Mulan: a companion XML document names the label attributes.
//   - MEKA:  the relation name carries "-C <n>"; n > 0 means the first n
//            attributes are labels, n < 0 the last |n|.
// Label attributes must hold 0/1 (or true/false) values. In sparse rows an
// omitted attribute is 0 for numerics and the first declared value for
// nominals, which encodes "label absent" for the usual {0,1} label domains.

namespace mlbase {

namespace detail {

struct raw_field {
  std::string text;
  bool quoted = false;

  bool missing() const { return !quoted && text == "?"; }
};

struct arff_row {
  std::size_t line = 0;
  std::vector<feature_value> values;  // one per attribute
};

struct arff_document {
  std::string relation;
  std::vector<feature_attribute> attributes;
  std::vector<arff_row> rows;
};

// Splits on top-level commas, honoring single/double quotes and backslash
// escapes. Returns unquoted, unescaped fields.
inline std::vector<raw_field> split_fields(std::string_view text, std::size_t line) {
  std::vector<raw_field> fields;
  raw_field current;
  std::string pending;  // raw text of the field being scanned
  bool in_quotes = false;
  char quote_char = '\0';
  bool saw_quote = false;

  auto flush = [&]() {
    if (!saw_quote) {
      pending = std::string(trim(pending));
    }
    fields.push_back(raw_field{std::move(pending), saw_quote});
    pending.clear();
    saw_quote = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '\\') {
        if (i + 1 >= text.size()) throw parse_error(line, "dangling escape in quoted value");
        const char escaped = text[++i];
        switch (escaped) {
          case 'n': pending.push_back('\n'); break;
          case 't': pending.push_back('\t'); break;
          case 'r': pending.push_back('\r'); break;
          case '\\': pending.push_back('\\'); break;
          case '\'': pending.push_back('\''); break;
          case '"': pending.push_back('"'); break;
          default:
            pending.push_back('\\');
            pending.push_back(escaped);
        }
      } else if (c == quote_char) {
        in_quotes = false;
      } else {
        pending.push_back(c);
      }
    } else if (c == '\'' || c == '"') {
      if (!pending.empty() && !trim(pending).empty()) {
        throw parse_error(line, "unexpected quote inside unquoted value");
      }
      pending.clear();
      in_quotes = true;
      quote_char = c;
      saw_quote = true;
    } else if (c == ',') {
      flush();
    } else {
      if (saw_quote && c != ' ' && c != '\t') {
        throw parse_error(line, "trailing characters after quoted value");
      }
      if (!saw_quote) pending.push_back(c);
    }
  }
  if (in_quotes) throw parse_error(line, "unterminated quoted value");
  flush();
  return fields;
}

inline bool needs_quoting(std::string_view token) {
  if (token.empty() || token == "?") return true;
  if (token.front() == ' ' || token.back() == ' ') return true;
  return token.find_first_of(",'\"{}% \t\\") != std::string_view::npos;
}

inline std::string quote_token(std::string_view token) {
  if (!needs_quoting(token)) return std::string(token);
  std::string out;
  out.reserve(token.size() + 2);
  out.push_back('\'');
  for (const char c : token) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\'': out += "\\'"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  out.push_back('\'');
  return out;
}

// Reads an attribute/relation name: either a quoted token or a bare word.
// Returns the name and the rest of the line.
inline std::pair<std::string, std::string_view> take_name(std::string_view text, std::size_t line) {
  text = trim(text);
  if (text.empty()) throw parse_error(line, "missing name");
  if (text.front() == '\'' || text.front() == '"') {
    const char quote_char = text.front();
    std::string name;
    std::size_t i = 1;
    for (; i < text.size(); ++i) {
      if (text[i] == '\\' && i + 1 < text.size()) {
        const char escaped = text[++i];
        switch (escaped) {
          case 'n': name.push_back('\n'); break;
          case 't': name.push_back('\t'); break;
          case 'r': name.push_back('\r'); break;
          default: name.push_back(escaped);
        }
      } else if (text[i] == quote_char) {
        return {std::move(name), text.substr(i + 1)};
      } else {
        name.push_back(text[i]);
      }
    }
    throw parse_error(line, "unterminated quoted name");
  }
  const std::size_t end = text.find_first_of(" \t");
  if (end == std::string_view::npos) return {std::string(text), {}};
  return {std::string(text.substr(0, end)), text.substr(end)};
}

inline feature_attribute parse_attribute_declaration(std::string_view rest, std::size_t line) {
  feature_attribute attribute;
  auto [name, type_text] = take_name(rest, line);
  attribute.name = std::move(name);
  const std::string_view type = trim(type_text);
  if (type.empty()) throw parse_error(line, "attribute '" + attribute.name + "' has no type");

  if (type.front() == '{') {
    if (type.back() != '}') throw parse_error(line, "unterminated nominal domain");
    attribute.kind = attribute_kind::nominal;
    const std::string_view inner = type.substr(1, type.size() - 2);
    if (trim(inner).empty()) throw parse_error(line, "empty nominal domain");
    for (raw_field& field : split_fields(inner, line)) {
      attribute.domain.push_back(std::move(field.text));
    }
    return attribute;
  }

  const std::string keyword = to_lower(trim(type.substr(0, type.find_first_of(" \t"))));
  if (keyword == "numeric" || keyword == "real" || keyword == "integer") {
    attribute.kind = attribute_kind::numeric;
  } else if (keyword == "string") {
    attribute.kind = attribute_kind::text;
  } else if (keyword == "date") {
    throw parse_error(line, "date attributes are not supported");
  } else {
    throw parse_error(line, "unknown attribute type '" + std::string(type) + "'");
  }
  return attribute;
}

inline feature_value typed_value(const raw_field& field, const feature_attribute& attribute,
                                 std::size_t line) {
  if (field.missing()) return feature_value::missing();
  switch (attribute.kind) {
    case attribute_kind::numeric: {
      const auto number = parse_double(field.text);
      if (!number) {
        throw value_error(line, "attribute '" + attribute.name + "': '" + field.text +
                                    "' is not numeric");
      }
      return feature_value::numeric(*number);
    }
    case attribute_kind::nominal: {
      for (const std::string& candidate : attribute.domain) {
        if (candidate == field.text) return feature_value::token(field.text);
      }
      throw value_error(line, "attribute '" + attribute.name + "': '" + field.text +
                                  "' is not in the declared domain");
    }
    case attribute_kind::text:
      return feature_value::token(field.text);
  }
  throw value_error(line, "unreachable attribute kind");
}

inline feature_value sparse_default(const feature_attribute& attribute) {
  switch (attribute.kind) {
    case attribute_kind::numeric: return feature_value::numeric(0.0);
    case attribute_kind::nominal: return feature_value::token(attribute.domain.front());
    case attribute_kind::text: return feature_value::token("");
  }
  return feature_value::missing();
}

inline std::vector<feature_value> parse_sparse_row(std::string_view body,
                                                   const std::vector<feature_attribute>& attributes,
                                                   std::size_t line) {
  std::vector<feature_value> values;
  values.reserve(attributes.size());
  for (const feature_attribute& attribute : attributes) {
    values.push_back(sparse_default(attribute));
  }
  if (trim(body).empty()) return values;  // "{}" row: all defaults

  std::vector<bool> seen(attributes.size(), false);
  for (const raw_field& entry_field : split_fields(body, line)) {
    const std::string& entry = entry_field.text;
    const std::size_t space = entry.find_first_of(" \t");
    if (space == std::string::npos) {
      throw parse_error(line, "sparse entry '" + entry + "' has no value");
    }
    const auto index = parse_integer(std::string_view(entry).substr(0, space));
    if (!index || *index < 0) {
      throw parse_error(line, "bad sparse attribute index in '" + entry + "'");
    }
    const auto attribute_index = static_cast<std::size_t>(*index);
    if (attribute_index >= attributes.size()) {
      throw parse_error(line, "sparse attribute index " + std::to_string(attribute_index) +
                                  " out of range (have " + std::to_string(attributes.size()) +
                                  " attributes)");
    }
    if (seen[attribute_index]) {
      throw parse_error(line, "duplicate sparse attribute index " +
                                  std::to_string(attribute_index));
    }
    seen[attribute_index] = true;
    std::string_view value_text = trim(std::string_view(entry).substr(space + 1));
    const std::vector<raw_field> value_fields = split_fields(value_text, line);
    if (value_fields.size() != 1) {
      throw parse_error(line, "sparse entry '" + entry + "' holds more than one value");
    }
    values[attribute_index] = typed_value(value_fields.front(), attributes[attribute_index], line);
  }
  return values;
}

inline arff_document parse_arff(std::string_view text) {
  arff_document document;
  bool saw_relation = false;
  bool in_data = false;
  std::size_t line_number = 0;

  std::size_t position = 0;
  while (position <= text.size()) {
    const std::size_t newline = text.find('\n', position);
    std::string_view raw_line = (newline == std::string_view::npos)
                                    ? text.substr(position)
                                    : text.substr(position, newline - position);
    position = (newline == std::string_view::npos) ? text.size() + 1 : newline + 1;
    ++line_number;

    if (!raw_line.empty() && raw_line.back() == '\r') raw_line.remove_suffix(1);
    const std::string_view content = trim(raw_line);
    if (content.empty() || content.front() == '%') continue;

    if (!in_data && content.front() == '@') {
      const std::size_t keyword_end = content.find_first_of(" \t");
      const std::string_view keyword =
          content.substr(1, keyword_end == std::string_view::npos ? content.size() - 1
                                                                  : keyword_end - 1);
      const std::string_view rest =
          keyword_end == std::string_view::npos ? std::string_view{} : content.substr(keyword_end);

      if (iequals(keyword, "relation")) {
        const std::string_view bare = trim(rest);
        if (bare.empty()) throw parse_error(line_number, "missing relation name");
        if (bare.front() == '\'' || bare.front() == '"') {
          auto [name, tail] = take_name(bare, line_number);
          if (!trim(tail).empty()) {
            throw parse_error(line_number, "unexpected text after relation name");
          }
          document.relation = std::move(name);
        } else {
          document.relation = std::string(bare);  // Weka keeps the rest of the line
        }
        saw_relation = true;
      } else if (iequals(keyword, "attribute")) {
        if (!saw_relation) throw parse_error(line_number, "@attribute before @relation");
        document.attributes.push_back(parse_attribute_declaration(rest, line_number));
      } else if (iequals(keyword, "data")) {
        if (document.attributes.empty()) {
          throw parse_error(line_number, "@data with no declared attributes");
        }
        in_data = true;
      } else {
        throw parse_error(line_number, "unknown directive '@" + std::string(keyword) + "'");
      }
      continue;
    }

    if (!in_data) {
      throw parse_error(line_number, "instance data before @data section");
    }

    arff_row row;
    row.line = line_number;
    if (content.front() == '{') {
      if (content.back() != '}') throw parse_error(line_number, "unterminated sparse row");
      row.values =
          parse_sparse_row(content.substr(1, content.size() - 2), document.attributes, line_number);
    } else {
      const std::vector<raw_field> fields = split_fields(content, line_number);
      if (fields.size() != document.attributes.size()) {
        throw parse_error(line_number, "row has " + std::to_string(fields.size()) +
                                           " values, expected " +
                                           std::to_string(document.attributes.size()));
      }
      row.values.reserve(fields.size());
      for (std::size_t i = 0; i < fields.size(); ++i) {
        row.values.push_back(typed_value(fields[i], document.attributes[i], line_number));
      }
    }
    document.rows.push_back(std::move(row));
  }

  if (!in_data) throw parse_error(line_number, "missing @data section");
  if (document.rows.empty()) throw parse_error(line_number, "no instance rows after @data");
  return document;
}

// true/1 means member, false/0 non-member, anything else is a value error.
inline bool label_membership(const feature_value& value, const std::string& attribute_name,
                             std::size_t line) {
  if (value.kind == feature_value::kind_t::numeric) {
    if (value.number == 1.0) return true;
    if (value.number == 0.0) return false;
  } else if (value.kind == feature_value::kind_t::token) {
    if (value.text == "1" || iequals(value.text, "true")) return true;
    if (value.text == "0" || iequals(value.text, "false")) return false;
  }
  const std::string shown =
      value.kind == feature_value::kind_t::numeric ? format_double(value.number)
      : value.kind == feature_value::kind_t::missing ? std::string("?")
                                                     : value.text;
  throw value_error(line, "label '" + attribute_name + "': value '" + shown +
                              "' is outside {0,1,true,false}");
}

// Assembles a dataset from a parsed document plus the label column indices
// (label_columns[i] is the attribute column of label i).
inline multi_label_dataset assemble_dataset(arff_document document,
                                            const std::vector<std::size_t>& label_columns,
                                            std::vector<std::string> label_names) {
  std::vector<bool> is_label(document.attributes.size(), false);
  for (std::size_t column : label_columns) is_label[column] = true;

  multi_label_dataset dataset;
  dataset.name = std::move(document.relation);
  dataset.label_names = std::move(label_names);
  for (std::size_t column = 0; column < document.attributes.size(); ++column) {
    if (!is_label[column]) dataset.feature_schema.push_back(std::move(document.attributes[column]));
  }

  dataset.instances.reserve(document.rows.size());
  for (arff_row& row : document.rows) {
    instance inst;
    inst.labels = label_set(label_columns.size());
    inst.features.reserve(dataset.feature_schema.size());
    for (std::size_t index = 0; index < label_columns.size(); ++index) {
      const std::size_t column = label_columns[index];
      if (label_membership(row.values[column], dataset.label_names[index], row.line)) {
        inst.labels.insert(index);
      }
    }
    for (std::size_t column = 0; column < row.values.size(); ++column) {
      if (!is_label[column]) inst.features.push_back(std::move(row.values[column]));
    }
    dataset.instances.push_back(std::move(inst));
  }
  return dataset;
}

}  // namespace detail

/// Label names declared in a Mulan XML header, in declaration order.
inline std::vector<std::string> parse_label_xml(std::string_view xml_text) {
  std::vector<std::string> names;
  std::size_t position = 0;
  while (true) {
    const std::size_t open = xml_text.find("<label", position);
    if (open == std::string_view::npos) break;
    const std::size_t close = xml_text.find('>', open);
    if (close == std::string_view::npos) {
      throw schema_error("label XML: unterminated <label> tag");
    }
    const std::string_view tag = xml_text.substr(open, close - open);
    const std::size_t name_pos = tag.find("name");
    if (name_pos != std::string_view::npos) {
      std::size_t i = name_pos + 4;
      while (i < tag.size() && (tag[i] == ' ' || tag[i] == '\t' || tag[i] == '=')) ++i;
      if (i < tag.size() && (tag[i] == '"' || tag[i] == '\'')) {
        const char quote_char = tag[i++];
        const std::size_t end = tag.find(quote_char, i);
        if (end == std::string_view::npos) {
          throw schema_error("label XML: unterminated name attribute");
        }
        std::string name(tag.substr(i, end - i));
        // minimal entity decoding
        const std::pair<std::string_view, std::string_view> entities[] = {
            {"&lt;", "<"}, {"&gt;", ">"}, {"&quot;", "\""}, {"&apos;", "'"}, {"&amp;", "&"}};
        for (const auto& [entity, replacement] : entities) {
          std::size_t at = 0;
          while ((at = name.find(entity, at)) != std::string::npos) {
            name.replace(at, entity.size(), replacement);
            at += replacement.size();
          }
        }
        if (name.empty()) throw schema_error("label XML: empty label name");
        names.push_back(std::move(name));
      }
    }
    position = close + 1;
  }
  if (names.empty()) throw schema_error("label XML declares no labels");
  for (std::size_t i = 0; i < names.size(); ++i) {
    for (std::size_t j = i + 1; j < names.size(); ++j) {
      if (names[i] == names[j]) {
        throw schema_error("label XML declares '" + names[i] + "' twice");
      }
    }
  }
  return names;
}

/// Parses a Mulan-style pair: the ARFF document plus the XML header that
/// names the label attributes. Label index order is the XML order.
inline multi_label_dataset parse_mulan(std::string_view arff_text, std::string_view xml_text) {
  detail::arff_document document = detail::parse_arff(arff_text);
  std::vector<std::string> label_names = parse_label_xml(xml_text);

  std::map<std::string_view, std::size_t> column_of;
  for (std::size_t column = 0; column < document.attributes.size(); ++column) {
    column_of.emplace(document.attributes[column].name, column);
  }
  std::vector<std::size_t> label_columns;
  label_columns.reserve(label_names.size());
  for (const std::string& name : label_names) {
    const auto found = column_of.find(name);
    if (found == column_of.end()) {
      throw schema_error("label '" + name + "' is not an attribute of the ARFF document");
    }
    label_columns.push_back(found->second);
  }
  return detail::assemble_dataset(std::move(document), label_columns, std::move(label_names));
}

namespace detail {

struct meka_marker {
  std::size_t begin = 0;  // position of the "-C"
  std::size_t end = 0;    // one past the count token
  long long count = 0;    // non-zero
};

/// Finds the first "-C <n>" token in a relation name.
inline std::optional<meka_marker> find_meka_count(std::string_view relation) {
  std::size_t at = relation.find("-C");
  while (at != std::string_view::npos) {
    std::size_t start = at + 2;
    while (start < relation.size() && (relation[start] == ' ' || relation[start] == '\t')) ++start;
    std::size_t stop = start;
    while (stop < relation.size() && relation[stop] != ' ' && relation[stop] != '\t') ++stop;
    const std::optional<long long> count = parse_integer(relation.substr(start, stop - start));
    if (count && *count != 0) return meka_marker{at, stop, *count};
    at = relation.find("-C", at + 1);
  }
  return std::nullopt;
}

}  // namespace detail

/// True when the relation name carries a MEKA "-C <n>" label count.
inline bool is_meka_relation(std::string_view relation) {
  return detail::find_meka_count(relation).has_value();
}

/// Parses a MEKA-style document: the label count is the "-C <n>" token in
/// the relation name; positive n puts the labels first, negative last.
inline multi_label_dataset parse_meka(std::string_view arff_text) {
  detail::arff_document document = detail::parse_arff(arff_text);

  const auto meka = detail::find_meka_count(document.relation);
  if (!meka) {
    throw schema_error("relation '" + document.relation + "' carries no MEKA -C label count");
  }
  const long long count = meka->count;
  const auto label_count = static_cast<std::size_t>(count < 0 ? -count : count);
  if (label_count > document.attributes.size()) {
    throw schema_error("MEKA label count " + std::to_string(label_count) + " exceeds the " +
                       std::to_string(document.attributes.size()) + " declared attributes");
  }

  std::vector<std::size_t> label_columns(label_count);
  const std::size_t first = count > 0 ? 0 : document.attributes.size() - label_count;
  for (std::size_t i = 0; i < label_count; ++i) label_columns[i] = first + i;

  std::vector<std::string> label_names;
  label_names.reserve(label_count);
  for (std::size_t column : label_columns) {
    label_names.push_back(document.attributes[column].name);
  }

  // "name: -C n" keeps the part before the colon; a bare "name -C n"
  // drops just the marker token.
  const std::size_t colon = document.relation.find(':');
  if (colon != std::string::npos && colon < meka->begin) {
    document.relation =
        std::string(detail::trim(std::string_view(document.relation).substr(0, colon)));
  } else {
    std::string trimmed = document.relation.substr(0, meka->begin) +
                          document.relation.substr(meka->end);
    document.relation = std::string(detail::trim(trimmed));
  }

  return detail::assemble_dataset(std::move(document), label_columns, std::move(label_names));
}

/// Canonical ARFF serialization: dense rows, shortest round-trip numerics.
inline std::string to_arff(const multi_label_dataset& dataset) {
  std::string out;
  out += "@relation " + detail::quote_token(dataset.name) + "\n\n";

  auto emit_attribute = [&out](const std::string& name, attribute_kind kind,
                               const std::vector<std::string>& domain) {
    out += "@attribute " + detail::quote_token(name) + " ";
    switch (kind) {
      case attribute_kind::numeric: out += "numeric"; break;
      case attribute_kind::text: out += "string"; break;
      case attribute_kind::nominal: {
        out.push_back('{');
        for (std::size_t i = 0; i < domain.size(); ++i) {
          if (i > 0) out.push_back(',');
          out += detail::quote_token(domain[i]);
        }
        out.push_back('}');
        break;
      }
    }
    out.push_back('\n');
  };

  for (const feature_attribute& attribute : dataset.feature_schema) {
    emit_attribute(attribute.name, attribute.kind, attribute.domain);
  }
  static const std::vector<std::string> binary_domain = {"0", "1"};
  for (const std::string& label : dataset.label_names) {
    emit_attribute(label, attribute_kind::nominal, binary_domain);
  }

  out += "\n@data\n";
  for (const instance& inst : dataset.instances) {
    for (std::size_t i = 0; i < inst.features.size(); ++i) {
      if (i > 0) out.push_back(',');
      const feature_value& value = inst.features[i];
      switch (value.kind) {
        case feature_value::kind_t::missing: out.push_back('?'); break;
        case feature_value::kind_t::numeric: out += detail::format_double(value.number); break;
        case feature_value::kind_t::token: out += detail::quote_token(value.text); break;
      }
    }
    for (std::size_t index = 0; index < dataset.label_count(); ++index) {
      if (index > 0 || !inst.features.empty()) out.push_back(',');
      out.push_back(inst.labels.contains(index) ? '1' : '0');
    }
    out.push_back('\n');
  }
  return out;
}

/// Mulan label header matching to_arff's label encoding.
inline std::string to_label_xml(const multi_label_dataset& dataset) {
  auto escape = [](const std::string& text) {
    std::string out;
    for (const char c : text) {
      switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out.push_back(c);
      }
    }
    return out;
  };

  std::string out = "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n";
  out += "<labels xmlns=\"http://mulan.sourceforge.net/labels\">\n";
  for (const std::string& label : dataset.label_names) {
    out += "  <label name=\"" + escape(label) + "\"></label>\n";
  }
  out += "</labels>\n";
  return out;
}

}  // namespace mlbase
