#ifndef HODGECURL_REPORT_HPP
#define HODGECURL_REPORT_HPP

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <variant>

#include "hodgecurl/core.hpp"

namespace hodgecurl::report {

/// Minimal JSON value with deterministic serialization: object keys sorted
/// (std::map), floats printed with 17 significant digits.
class Json {
 public:
  using Array = std::vector<Json>;
  using Object = std::map<std::string, Json>;

  Json() : v_(nullptr) {}
  Json(std::nullptr_t) : v_(nullptr) {}
  Json(bool b) : v_(b) {}
  Json(int i) : v_(static_cast<std::int64_t>(i)) {}
  Json(std::int64_t i) : v_(i) {}
  Json(std::uint64_t i) : v_(static_cast<std::int64_t>(i)) {}
  Json(double d) : v_(d) {}
  Json(const char* s) : v_(std::string(s)) {}
  Json(std::string s) : v_(std::move(s)) {}
  Json(Array a) : v_(std::move(a)) {}
  Json(Object o) : v_(std::move(o)) {}

  static Json object() { return Json(Object{}); }
  static Json array() { return Json(Array{}); }

  Json& operator[](const std::string& key) {
    if (!std::holds_alternative<Object>(v_)) v_ = Object{};
    return std::get<Object>(v_)[key];
  }
  void push_back(Json j) {
    if (!std::holds_alternative<Array>(v_)) v_ = Array{};
    std::get<Array>(v_).push_back(std::move(j));
  }

  static std::string format_double(double d) {
    if (!std::isfinite(d)) return d > 0 ? "1e999" : (d < 0 ? "-1e999" : "null");
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", d);
    return buf;
  }

  void dump(std::ostream& out, int indent = 0) const {
    std::visit(
        [&](const auto& val) {
          using T = std::decay_t<decltype(val)>;
          if constexpr (std::is_same_v<T, std::nullptr_t>) {
            out << "null";
          } else if constexpr (std::is_same_v<T, bool>) {
            out << (val ? "true" : "false");
          } else if constexpr (std::is_same_v<T, std::int64_t>) {
            out << val;
          } else if constexpr (std::is_same_v<T, double>) {
            out << format_double(val);
          } else if constexpr (std::is_same_v<T, std::string>) {
            dump_string(out, val);
          } else if constexpr (std::is_same_v<T, Array>) {
            out << "[";
            bool first = true;
            for (const auto& e : val) {
              if (!first) out << ",";
              first = false;
              out << "\n" << std::string(indent + 2, ' ');
              e.dump(out, indent + 2);
            }
            if (!val.empty()) out << "\n" << std::string(indent, ' ');
            out << "]";
          } else {
            out << "{";
            bool first = true;
            for (const auto& [k, e] : val) {
              if (!first) out << ",";
              first = false;
              out << "\n" << std::string(indent + 2, ' ');
              dump_string(out, k);
              out << ": ";
              e.dump(out, indent + 2);
            }
            if (!val.empty()) out << "\n" << std::string(indent, ' ');
            out << "}";
          }
        },
        v_);
  }

  std::string dump() const {
    std::ostringstream os;
    dump(os);
    os << "\n";
    return os.str();
  }

 private:
  static void dump_string(std::ostream& out, const std::string& s) {
    out << '"';
    for (char c : s) {
      switch (c) {
        case '"': out << "\\\""; break;
        case '\\': out << "\\\\"; break;
        case '\n': out << "\\n"; break;
        case '\t': out << "\\t"; break;
        case '\r': out << "\\r"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "\\u%04x", c);
            out << buf;
          } else {
            out << c;
          }
      }
    }
    out << '"';
  }

  std::variant<std::nullptr_t, bool, std::int64_t, double, std::string, Array, Object> v_;
};

inline Json vector_json(const Vec& v) {
  Json a = Json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

inline Json vector_json(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

/// Row-major little-endian float64 sidecar with a uint64 (rows, cols) header.
inline void write_sidecar(const std::string& path, const Mat& M) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open sidecar " + path);
  std::uint64_t dims[2] = {static_cast<std::uint64_t>(M.rows()),
                           static_cast<std::uint64_t>(M.cols())};
  out.write(reinterpret_cast<const char*>(dims), sizeof(dims));
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j) {
      double v = M(i, j);
      out.write(reinterpret_cast<const char*>(&v), sizeof(v));
    }
}

/// Matrices with at most 64 entries are inlined; larger ones are summarized
/// by norms, with an optional binary sidecar next to the report.
inline Json matrix_json(const Mat& M, const std::string& name = "",
                        const std::string& sidecar_dir = "") {
  Json j = Json::object();
  j["rows"] = static_cast<std::int64_t>(M.rows());
  j["cols"] = static_cast<std::int64_t>(M.cols());
  if (M.size() <= 64) {
    Json rows = Json::array();
    for (int i = 0; i < M.rows(); ++i) {
      Json r = Json::array();
      for (int c = 0; c < M.cols(); ++c) r.push_back(M(i, c));
      rows.push_back(std::move(r));
    }
    j["entries"] = std::move(rows);
  } else {
    j["fro_norm"] = M.norm();
    j["inf_norm"] = inf_norm(M);
    if (!sidecar_dir.empty() && !name.empty()) {
      std::string file = name + ".bin";
      write_sidecar(sidecar_dir + "/" + file, M);
      j["sidecar"] = file;
    }
  }
  return j;
}

}  // namespace hodgecurl::report

#endif
