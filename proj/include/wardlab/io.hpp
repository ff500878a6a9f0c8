#ifndef WARDLAB_IO_HPP
#define WARDLAB_IO_HPP

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "wardlab/certify.hpp"
#include "wardlab/kmedian.hpp"

namespace wardlab {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// 17 significant digits; round-trips any finite double.
inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace detail {

inline std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

// Emits "inf" as a quoted string, finite values as 17-digit numbers.
inline std::string json_number_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  return fmt_double(v);
}

inline std::string vec_json(const Vec& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += fmt_double(v[i]);
  }
  return out + "]";
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Writers. Hand-rolled so that key order and float formatting are pinned and
// re-running a command yields bitwise-identical files.
// ---------------------------------------------------------------------------

inline std::string dataset_to_json(const Dataset& ds) {
  std::string out = "{\n  \"dim\": " + std::to_string(ds.dim) + ",\n  \"points\": [\n";
  for (int i = 0; i < ds.size(); ++i) {
    const WeightedPoint& p = ds.points[i];
    out += "    {\"x\": " + detail::vec_json(p.coords) +
           ", \"w\": " + fmt_double(p.weight) + ", \"label\": " +
           (ds.labels ? std::to_string((*ds.labels)[i]) : std::string("null")) + "}";
    out += i + 1 < ds.size() ? ",\n" : "\n";
  }
  out += "  ],\n  \"meta\": {";
  bool first = true;
  for (const auto& [key, value] : ds.meta) {
    if (!first) out += ", ";
    first = false;
    out += "\"" + detail::json_escape(key) + "\": \"" + detail::json_escape(value) + "\"";
  }
  out += "}\n}\n";
  return out;
}

inline std::string metric_instance_to_json(const FiniteMetricInstance& inst) {
  std::string out = "{\n  \"n\": " + std::to_string(inst.n) + ",\n  \"dist\": [\n";
  for (int i = 0; i < inst.n; ++i) {
    out += "    " + detail::vec_json(inst.dist[i]);
    out += i + 1 < inst.n ? ",\n" : "\n";
  }
  out += "  ],\n  \"weights\": " + detail::vec_json(inst.weights) + "\n}\n";
  return out;
}

inline std::string dendrogram_to_json(const Dendrogram& dg) {
  std::string out = "{\n  \"n\": " + std::to_string(dg.n_leaves) +
                    ",\n  \"engine\": \"" + engine_name(dg.engine) +
                    "\",\n  \"merges\": [\n";
  for (std::size_t t = 0; t < dg.merges.size(); ++t) {
    const MergeRecord& m = dg.merges[t];
    out += "    {\"a\": " + std::to_string(m.left_id) + ", \"b\": " +
           std::to_string(m.right_id) + ", \"id\": " + std::to_string(m.new_id) +
           ", \"cost\": " + fmt_double(m.cost) + ", \"weight\": " +
           fmt_double(m.result_weight) + ", \"delta\": " +
           fmt_double(m.result_internal_cost) + "}";
    out += t + 1 < dg.merges.size() ? ",\n" : "\n";
  }
  out += "  ]\n}\n";
  return out;
}

inline std::string clustering_to_json(const Clustering& cl) {
  std::string out = "{\n  \"k\": " + std::to_string(cl.k) +
                    ",\n  \"cost\": " + fmt_double(cl.cost) + ",\n  \"assignment\": [";
  for (std::size_t i = 0; i < cl.assignment.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(cl.assignment[i]);
  }
  out += "],\n  \"centers\": [\n";
  for (std::size_t c = 0; c < cl.centers.size(); ++c) {
    out += "    " + detail::vec_json(cl.centers[c]);
    out += c + 1 < cl.centers.size() ? ",\n" : "\n";
  }
  out += "  ]\n}\n";
  return out;
}

inline std::string certificate_to_json(const SeparationCertificate& cert) {
  const WardQuality verdict = predict_ward_quality(cert);
  std::string out = "{\n";
  out += "  \"delta_weak\": " + detail::json_number_or_inf(cert.delta_weak) + ",\n";
  out += "  \"delta_strong\": " + detail::json_number_or_inf(cert.delta_strong) + ",\n";
  out += "  \"alpha\": " + detail::json_number_or_inf(cert.alpha) + ",\n";
  out += "  \"nu\": " + fmt_double(cert.nu) + ",\n";
  out += std::string("  \"strict\": ") + (cert.strict_separation ? "true" : "false") + ",\n";
  out += "  \"eps\": " +
         (cert.eps_separation ? fmt_double(*cert.eps_separation) : std::string("null")) + ",\n";
  out += std::string("  \"verdict\": \"") + ward_quality_name(verdict) + "\"\n}\n";
  return out;
}

inline std::string trace_to_json_body(const MedianMergeTrace& trace, int indent) {
  const std::string pad(indent, ' ');
  std::string out = "{\n" + pad + "  \"setting\": \"" + median_setting_name(trace.setting) +
                    "\",\n" + pad + "  \"merges\": [\n";
  auto ids_json = [](const std::vector<int>& ids) {
    std::string s = "[";
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (i) s += ", ";
      s += std::to_string(ids[i]);
    }
    return s + "]";
  };
  for (std::size_t i = 0; i < trace.merges.size(); ++i) {
    out += pad + "    {\"a\": " + ids_json(trace.merges[i].left) +
           ", \"b\": " + ids_json(trace.merges[i].right) +
           ", \"cost\": " + fmt_double(trace.merges[i].cost_increase) + "}";
    out += i + 1 < trace.merges.size() ? ",\n" : "\n";
  }
  out += pad + "  ],\n" + pad + "  \"monotone\": " + (trace.monotone() ? "true" : "false") +
         "\n" + pad + "}";
  return out;
}

inline std::string trace_to_json(const MedianMergeTrace& trace) {
  return trace_to_json_body(trace, 0) + "\n";
}

/// Demo payload: the k-median trace plus, when available, the Ward trace on
/// the same points.
inline std::string kmedian_demo_to_json(const MedianMergeTrace& kmedian,
                                        const MedianMergeTrace* ward) {
  std::string out = "{\n  \"kmedian\": " + trace_to_json_body(kmedian, 2);
  if (ward) out += ",\n  \"ward\": " + trace_to_json_body(*ward, 2);
  out += "\n}\n";
  return out;
}

// ---------------------------------------------------------------------------
// Readers (nlohmann/json; tolerant about formatting, strict about schema).
// ---------------------------------------------------------------------------

inline Dataset dataset_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("points"))
    throw IoError("malformed dataset: missing dim/points");
  Dataset ds;
  ds.dim = j.at("dim").get<int>();
  bool any_label = false, all_label = true;
  std::vector<int> labels;
  for (const auto& pj : j.at("points")) {
    WeightedPoint p;
    p.coords = pj.at("x").get<std::vector<double>>();
    p.weight = pj.at("w").get<double>();
    ds.points.push_back(std::move(p));
    if (pj.contains("label") && !pj.at("label").is_null()) {
      any_label = true;
      labels.push_back(pj.at("label").get<int>());
    } else {
      all_label = false;
    }
  }
  if (any_label && !all_label) throw IoError("malformed dataset: partial labels");
  if (any_label) ds.labels = std::move(labels);
  if (j.contains("meta"))
    for (const auto& [key, value] : j.at("meta").items())
      ds.meta[key] = value.is_string() ? value.get<std::string>() : value.dump();
  ds.validate();
  return ds;
}

inline FiniteMetricInstance metric_instance_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("dist") || !j.contains("weights"))
    throw IoError("malformed metric instance");
  FiniteMetricInstance inst;
  inst.n = j.at("n").get<int>();
  inst.dist = j.at("dist").get<std::vector<std::vector<double>>>();
  inst.weights = j.at("weights").get<std::vector<double>>();
  inst.validate();
  return inst;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

inline nlohmann::json parse_json_file(const std::string& path) {
  try {
    return nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed JSON in " + path + ": " + e.what());
  }
}

inline Dataset load_dataset(const std::string& path) {
  return dataset_from_json(parse_json_file(path));
}

inline FiniteMetricInstance load_metric_instance(const std::string& path) {
  return metric_instance_from_json(parse_json_file(path));
}

// ---------------------------------------------------------------------------
// CSV (RFC 4180: header row, LF line endings, quoting only when needed).
// ---------------------------------------------------------------------------

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string csv_table(const std::vector<std::string>& header,
                             const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += csv_field(header[i]);
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_field(row[i]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace wardlab

#endif  // WARDLAB_IO_HPP
