#include "llk/report.hpp"

#include <cmath>
#include <cstdio>

namespace llk {

namespace {

void append_indent(std::string& out, int indent, int depth) {
  if (indent <= 0) return;
  out += '\n';
  out.append(static_cast<std::size_t>(indent * depth), ' ');
}

void emit(const Json& v, std::string& out, int indent, int depth) {
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ',';
        first = false;
        append_indent(out, indent, depth + 1);
        out += Json(it.key()).dump();
        out += indent > 0 ? ": " : ":";
        emit(it.value(), out, indent, depth + 1);
      }
      append_indent(out, indent, depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& e : v) {
        if (!first) out += ',';
        first = false;
        append_indent(out, indent, depth + 1);
        emit(e, out, indent, depth + 1);
      }
      append_indent(out, indent, depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float: {
      const double d = v.get<double>();
      if (std::isfinite(d)) {
        out += format_number(d);
      } else {
        out += '"' + format_number(d) + '"';
      }
      return;
    }
    default:
      out += v.dump();
      return;
  }
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "NaN";
  if (std::isinf(v)) return v > 0 ? "Infinity" : "-Infinity";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string to_report_text(const Json& doc, int indent) {
  std::string out;
  emit(doc, out, indent, 0);
  out += '\n';
  return out;
}

}  // namespace llk
