#include "prmgen/model_xml.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "prmgen/errors.hpp"
#include "xml.hpp"

namespace prmgen {

std::string_view model_issue_name(ModelIssue issue) {
  switch (issue) {
    case ModelIssue::kMalformedXml: return "malformed-xml";
    case ModelIssue::kUnknownTag: return "unknown-tag";
    case ModelIssue::kMissingAttribute: return "missing-attribute";
    case ModelIssue::kInvalidValue: return "invalid-value";
    case ModelIssue::kDanglingReference: return "dangling-reference";
    case ModelIssue::kNonNormalizedRow: return "non-normalized-row";
    case ModelIssue::kInconsistent: return "inconsistent";
  }
  return "?";
}

ModelParseError::ModelParseError(ModelIssue issue, std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), issue_(issue), line_(line) {}

namespace {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string state_list(const AttributeDef& a) {
  std::string out;
  for (std::size_t i = 0; i < a.states.size(); ++i) {
    if (i > 0) out += ',';
    out += a.states[i];
  }
  return out;
}

std::string parent_token(const RelationalSchema& schema, const Dependency& d) {
  return attribute_path(schema, d.parent) + ":" + chain_path(schema, d.chain);
}

}  // namespace

std::string serialize_prm(const Prm& prm) {
  const auto& schema = prm.schema;
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<prm version=\"1\" kmax=\"" << prm.k_max << "\">\n";
  os << "  <schema>\n";
  for (const auto& cls : schema.classes) {
    os << "    <class name=\"" << xml::escape(cls.name) << "\" pk=\"" << xml::escape(cls.primary_key) << "\">\n";
    for (const auto& a : cls.attributes) {
      os << "      <attribute name=\"" << xml::escape(a.name) << "\" states=\"" << xml::escape(state_list(a))
         << "\"/>\n";
    }
    for (std::size_t s : cls.reference_slots) {
      const auto& slot = schema.slots[s];
      os << "      <referenceSlot name=\"" << xml::escape(slot.name) << "\" target=\""
         << xml::escape(schema.classes[slot.referenced_class].name) << "\"/>\n";
    }
    os << "    </class>\n";
  }
  os << "  </schema>\n";
  os << "  <dependencies>\n";
  for (const auto& d : prm.structure.dependencies) {
    os << "    <dependency child=\"" << xml::escape(attribute_path(schema, d.child)) << "\" parent=\""
       << xml::escape(attribute_path(schema, d.parent)) << "\" chain=\"" << xml::escape(chain_path(schema, d.chain))
       << "\"";
    if (d.aggregator) os << " aggregator=\"" << aggregator_name(*d.aggregator) << "\"";
    os << "/>\n";
  }
  os << "  </dependencies>\n";
  os << "  <cpds>\n";
  for (const auto& cpd : prm.cpds) {
    std::string parents;
    for (const auto& p : cpd.parents) {
      if (!parents.empty()) parents += ' ';
      parents += parent_token(schema, p);
    }
    os << "    <cpd child=\"" << xml::escape(attribute_path(schema, cpd.child)) << "\" parents=\""
       << xml::escape(parents) << "\">\n";
    for (const auto& row : cpd.rows) {
      os << "      <row>";
      for (std::size_t v = 0; v < row.size(); ++v) {
        if (v > 0) os << ' ';
        os << format_double(row[v]);
      }
      os << "</row>\n";
    }
    os << "    </cpd>\n";
  }
  os << "  </cpds>\n";
  os << "</prm>\n";
  return os.str();
}

namespace {

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t end = s.find(sep, start);
    out.emplace_back(s.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
    if (end == std::string_view::npos) return out;
    start = end + 1;
  }
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream is{std::string(s)};
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

class ModelReader {
 public:
  Prm read(const xml::Element& root) {
    if (root.name != "prm") unknown(root);
    const std::string& version = require(root, "version");
    if (version != "1") {
      throw ModelParseError(ModelIssue::kInvalidValue, root.line, "unsupported format version " + version);
    }
    prm_.k_max = to_size(root, require(root, "kmax"), "kmax");

    const xml::Element* schema_el = nullptr;
    const xml::Element* deps_el = nullptr;
    const xml::Element* cpds_el = nullptr;
    for (const auto& child : root.children) {
      const xml::Element** slot = child.name == "schema"         ? &schema_el
                                  : child.name == "dependencies" ? &deps_el
                                  : child.name == "cpds"         ? &cpds_el
                                                                 : nullptr;
      if (!slot) unknown(child);
      if (*slot) throw ModelParseError(ModelIssue::kInconsistent, child.line, "repeated <" + child.name + ">");
      *slot = &child;
    }
    if (!schema_el || !deps_el || !cpds_el) {
      throw ModelParseError(ModelIssue::kMissingAttribute, root.line,
                            "<prm> needs <schema>, <dependencies> and <cpds>");
    }
    read_schema(*schema_el);
    read_dependencies(*deps_el);
    read_cpds(*cpds_el);

    if (const auto issues = validate_prm(prm_); !issues.empty()) {
      throw ModelParseError(ModelIssue::kInconsistent, root.line, issues.front());
    }
    return std::move(prm_);
  }

 private:
  [[noreturn]] static void unknown(const xml::Element& el) {
    throw ModelParseError(ModelIssue::kUnknownTag, el.line, "unknown tag <" + el.name + ">");
  }

  static const std::string& require(const xml::Element& el, std::string_view key) {
    const std::string* v = el.attribute(key);
    if (!v) {
      throw ModelParseError(ModelIssue::kMissingAttribute, el.line,
                            "<" + el.name + "> lacks attribute " + std::string(key));
    }
    return *v;
  }

  static std::size_t to_size(const xml::Element& el, const std::string& text, std::string_view what) {
    std::size_t value = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
      throw ModelParseError(ModelIssue::kInvalidValue, el.line,
                            std::string(what) + " is not a non-negative integer: " + text);
    }
    return value;
  }

  void read_schema(const xml::Element& el) {
    std::vector<ClassDef> classes;
    std::vector<std::pair<std::string, const xml::Element*>> pending_targets;
    std::vector<ReferenceSlot> slots;
    for (const auto& cls_el : el.children) {
      if (cls_el.name != "class") unknown(cls_el);
      ClassDef cls;
      cls.name = require(cls_el, "name");
      cls.primary_key = require(cls_el, "pk");
      if (class_ids_.contains(cls.name)) {
        throw ModelParseError(ModelIssue::kInconsistent, cls_el.line, "duplicate class " + cls.name);
      }
      class_ids_[cls.name] = classes.size();
      for (const auto& member : cls_el.children) {
        if (member.name == "attribute") {
          AttributeDef a;
          a.name = require(member, "name");
          a.states = split(require(member, "states"), ',');
          if (a.states.size() < 2) {
            throw ModelParseError(ModelIssue::kInvalidValue, member.line,
                                  cls.name + "." + a.name + " needs at least two states");
          }
          cls.attributes.push_back(std::move(a));
        } else if (member.name == "referenceSlot") {
          slots.push_back({require(member, "name"), classes.size(), 0});
          pending_targets.emplace_back(require(member, "target"), &member);
        } else {
          unknown(member);
        }
      }
      classes.push_back(std::move(cls));
    }
    for (std::size_t i = 0; i < slots.size(); ++i) {
      const auto it = class_ids_.find(pending_targets[i].first);
      if (it == class_ids_.end()) {
        throw ModelParseError(ModelIssue::kDanglingReference, pending_targets[i].second->line,
                              "slot " + slots[i].name + " targets unknown class " + pending_targets[i].first);
      }
      slots[i].referenced_class = it->second;
    }
    prm_.schema = assemble_schema(std::move(classes), std::move(slots));
    if (const auto findings = validate_schema(prm_.schema); !findings.empty()) {
      throw ModelParseError(ModelIssue::kInconsistent, el.line, "invalid schema: " + findings.front().message);
    }
    prm_.schema.class_dag = Dag(prm_.schema.class_count(), prm_.schema.class_dag.edges());
  }

  AttributeNode attribute_ref(const xml::Element& el, const std::string& path) const {
    const std::size_t dot = path.find('.');
    if (dot != std::string::npos) {
      const auto cls = class_ids_.find(path.substr(0, dot));
      if (cls != class_ids_.end()) {
        const auto& attrs = prm_.schema.classes[cls->second].attributes;
        for (std::size_t a = 0; a < attrs.size(); ++a) {
          if (attrs[a].name == path.substr(dot + 1)) return {cls->second, a};
        }
      }
    }
    throw ModelParseError(ModelIssue::kDanglingReference, el.line, "unknown attribute " + path);
  }

  SlotChain chain_ref(const xml::Element& el, std::size_t source, const std::string& path) const {
    SlotChain chain{source, {}};
    if (path.empty()) return chain;
    std::size_t at = source;
    for (const std::string& step : split(path, '/')) {
      const bool inverted = step.starts_with('~');
      const std::string name = inverted ? step.substr(1) : step;
      bool found = false;
      for (std::size_t s = 0; s < prm_.schema.slots.size() && !found; ++s) {
        const auto& slot = prm_.schema.slots[s];
        if (slot.name == name && (inverted ? slot.referenced_class : slot.owner_class) == at) {
          chain.slots.push_back({s, inverted});
          at = inverted ? slot.owner_class : slot.referenced_class;
          found = true;
        }
      }
      if (!found) {
        throw ModelParseError(ModelIssue::kDanglingReference, el.line,
                              "chain step " + step + " is not a slot of " + prm_.schema.classes[at].name);
      }
    }
    return chain;
  }

  void read_dependencies(const xml::Element& el) {
    for (const auto& dep_el : el.children) {
      if (dep_el.name != "dependency") unknown(dep_el);
      Dependency d;
      d.child = attribute_ref(dep_el, require(dep_el, "child"));
      d.parent = attribute_ref(dep_el, require(dep_el, "parent"));
      d.chain = chain_ref(dep_el, d.child.class_index, require(dep_el, "chain"));
      if (d.chain.end_class(prm_.schema) != d.parent.class_index) {
        throw ModelParseError(ModelIssue::kInconsistent, dep_el.line,
                              "chain does not end at the parent's class");
      }
      if (const std::string* agg = dep_el.attribute("aggregator")) {
        d.aggregator = parse_aggregator(*agg);
        if (!d.aggregator) throw ModelParseError(ModelIssue::kInvalidValue, dep_el.line, "unknown aggregator " + *agg);
      }
      prm_.structure.dependencies.push_back(std::move(d));
    }
  }

  void read_cpds(const xml::Element& el) {
    const AttributeIndex index(prm_.schema);
    std::vector<std::optional<Cpd>> by_attribute(index.size());
    for (const auto& cpd_el : el.children) {
      if (cpd_el.name != "cpd") unknown(cpd_el);
      Cpd cpd;
      cpd.child = attribute_ref(cpd_el, require(cpd_el, "child"));
      const std::string name = attribute_path(prm_.schema, cpd.child);
      const auto& child_attr = prm_.schema.classes[cpd.child.class_index].attributes[cpd.child.attribute_index];
      std::size_t rows = 1;
      for (const std::string& tok : split_ws(require(cpd_el, "parents"))) {
        const std::size_t colon = tok.find(':');
        if (colon == std::string::npos) {
          throw ModelParseError(ModelIssue::kInvalidValue, cpd_el.line, "parent entry needs attribute:chain: " + tok);
        }
        Dependency p;
        p.child = cpd.child;
        p.parent = attribute_ref(cpd_el, tok.substr(0, colon));
        p.chain = chain_ref(cpd_el, cpd.child.class_index, tok.substr(colon + 1));
        bool declared = false;
        for (const auto& d : prm_.structure.dependencies) {
          if (d.child == p.child && d.parent == p.parent && d.chain == p.chain) {
            p.aggregator = d.aggregator;
            declared = true;
          }
        }
        if (!declared) {
          throw ModelParseError(ModelIssue::kDanglingReference, cpd_el.line,
                                name + ": CPD parent " + tok + " is not a declared dependency");
        }
        const auto card =
            prm_.schema.classes[p.parent.class_index].attributes[p.parent.attribute_index].cardinality();
        cpd.parent_cardinalities.push_back(card);
        rows *= card;
        cpd.parents.push_back(std::move(p));
      }
      for (const auto& row_el : cpd_el.children) {
        if (row_el.name != "row") unknown(row_el);
        std::vector<double> row;
        double sum = 0.0;
        for (const std::string& tok : split_ws(row_el.text)) {
          double x = 0.0;
          const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), x);
          if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || !(x >= 0.0) || !std::isfinite(x)) {
            throw ModelParseError(ModelIssue::kInvalidValue, row_el.line, name + ": bad probability " + tok);
          }
          row.push_back(x);
          sum += x;
        }
        if (row.size() != child_attr.cardinality()) {
          throw ModelParseError(ModelIssue::kInvalidValue, row_el.line,
                                name + ": row has " + std::to_string(row.size()) + " entries, expected " +
                                    std::to_string(child_attr.cardinality()));
        }
        if (std::abs(sum - 1.0) > 1e-9) {
          throw ModelParseError(ModelIssue::kNonNormalizedRow, row_el.line,
                                name + ": CPD row sums to " + format_double(sum));
        }
        cpd.rows.push_back(std::move(row));
      }
      if (cpd.rows.size() != rows) {
        throw ModelParseError(ModelIssue::kInconsistent, cpd_el.line,
                              name + ": expected " + std::to_string(rows) + " rows, found " +
                                  std::to_string(cpd.rows.size()));
      }
      auto& slot = by_attribute[index.flat(cpd.child)];
      if (slot) throw ModelParseError(ModelIssue::kInconsistent, cpd_el.line, name + ": duplicate CPD");
      slot = std::move(cpd);
    }
    for (std::size_t f = 0; f < by_attribute.size(); ++f) {
      if (!by_attribute[f]) {
        throw ModelParseError(ModelIssue::kInconsistent, el.line,
                              attribute_path(prm_.schema, index.node(f)) + " has no CPD");
      }
      prm_.cpds.push_back(std::move(*by_attribute[f]));
    }
  }

  Prm prm_;
  std::map<std::string, std::size_t> class_ids_;
};

}  // namespace

Prm parse_prm(std::string_view text) {
  const xml::Element root = xml::parse(text);
  return ModelReader().read(root);
}

}  // namespace prmgen
