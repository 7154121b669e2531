#pragma once

#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

namespace fixtures {

struct SvgElement {
  std::string name;
  std::map<std::string, std::string> attrs;
  std::string text;

  std::string attr(const std::string& key) const {
    auto it = attrs.find(key);
    return it == attrs.end() ? std::string{} : it->second;
  }
  bool has_class(const std::string& c) const { return attr("class") == c; }
};

/// Parses SVG text as XML and flattens every element in document order.
/// Throws boost::property_tree::xml_parser_error when malformed.
inline std::vector<SvgElement> svg_elements(const std::string& svg) {
  namespace pt = boost::property_tree;
  std::istringstream in(svg);
  pt::ptree tree;
  pt::read_xml(in, tree);
  std::vector<SvgElement> out;
  std::function<void(const std::string&, const pt::ptree&)> walk = [&](const std::string& name,
                                                                      const pt::ptree& node) {
    SvgElement e{name, {}, node.data()};
    if (auto attrs = node.get_child_optional("<xmlattr>")) {
      for (const auto& [k, v] : *attrs) e.attrs[k] = v.data();
    }
    out.push_back(std::move(e));
    for (const auto& [child, sub] : node) {
      if (child != "<xmlattr>" && child != "<xmlcomment>") walk(child, sub);
    }
  };
  for (const auto& [name, node] : tree) walk(name, node);
  return out;
}

inline bool well_formed_svg(const std::string& svg) {
  try {
    const auto els = svg_elements(svg);
    return !els.empty() && els.front().name == "svg";
  } catch (const std::exception&) {
    return false;
  }
}

inline std::vector<SvgElement> with_class(const std::vector<SvgElement>& els, const std::string& c) {
  std::vector<SvgElement> out;
  for (const auto& e : els) {
    if (e.has_class(c)) out.push_back(e);
  }
  return out;
}

}  // namespace fixtures
