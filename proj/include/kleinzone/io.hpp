#pragma once

/// \file
/// CSV and JSON emission. Floating-point output is always "%.16e" (17
/// significant digits, lowercase exponent), so files are byte-identical
/// across runs and worker counts.

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <rapidjson/prettywriter.h>
#include <rapidjson/stringbuffer.h>

#include "kleinzone/scan.hpp"
#include "kleinzone/transmission.hpp"

namespace kleinzone::io {

inline constexpr const char* kSchemaVersion = "1";

/// %.16e, with nan/inf spelled out.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string join_flags(const ScanRecord& r) {
  std::vector<std::string> all = r.flags;
  if (r.point) all.insert(all.end(), r.point->flags.begin(), r.point->flags.end());
  std::string s;
  for (std::size_t i = 0; i < all.size(); ++i) s += (i ? ";" : "") + all[i];
  return s;
}

/// Columns: [U_over_m,] E_over_m, T, log10_T, T_avg, engine, flags.
/// U_over_m leads only in height sweeps.
inline void write_csv(std::ostream& os, const ScanConfig& cfg, const ScanResult& scan) {
  const bool height = cfg.sweep == Sweep::Height;
  if (height) os << "U_over_m,";
  os << "E_over_m,T,log10_T,T_avg,engine,flags\n";
  for (const auto& r : scan.records) {
    if (height) os << format_double(r.U / cfg.m) << ',';
    os << format_double(r.E / cfg.m) << ',';
    if (r.point) {
      const auto& p = *r.point;
      os << format_double(p.T) << ',' << format_double(p.log10_T) << ',';
      if (p.T_avg) os << format_double(*p.T_avg);
      os << ',' << to_string(p.engine);
    } else {
      os << ",,,";
    }
    os << ',' << csv_field(join_flags(r)) << '\n';
  }
}

/// rapidjson writer with fixed-format doubles.
class JsonWriter {
 public:
  JsonWriter() : w_(buf_) { w_.SetIndent(' ', 2); }

  void begin_object() { w_.StartObject(); }
  void end_object() { w_.EndObject(); }
  void begin_array() { w_.StartArray(); }
  void end_array() { w_.EndArray(); }
  void key(const char* k) { w_.Key(k); }

  void value(double v) {
    if (!std::isfinite(v)) {
      w_.Null();
      return;
    }
    const std::string s = format_double(v);
    w_.RawValue(s.c_str(), s.size(), rapidjson::kNumberType);
  }
  void value(const std::optional<double>& v) {
    if (v) value(*v);
    else w_.Null();
  }
  void value(const std::string& s) { w_.String(s.c_str(), static_cast<rapidjson::SizeType>(s.size())); }
  void value(const char* s) { w_.String(s); }
  void value(bool b) { w_.Bool(b); }
  void value(int v) { w_.Int(v); }
  void value(long long v) { w_.Int64(v); }
  void value(std::size_t v) { w_.Uint64(v); }
  void null() { w_.Null(); }

  template <class T>
  void field(const char* k, const T& v) {
    key(k);
    value(v);
  }

  void strings(const char* k, const std::vector<std::string>& v) {
    key(k);
    begin_array();
    for (const auto& s : v) value(s);
    end_array();
  }

  void doubles(const char* k, const std::vector<double>& v) {
    key(k);
    begin_array();
    for (double d : v) value(d);
    end_array();
  }

  std::string str() const { return std::string(buf_.GetString(), buf_.GetSize()) + "\n"; }

 private:
  rapidjson::StringBuffer buf_;
  rapidjson::PrettyWriter<rapidjson::StringBuffer> w_;
};

inline void write_config(JsonWriter& j, const ScanConfig& cfg, const std::string& units) {
  j.key("config");
  j.begin_object();
  j.field("preset", cfg.preset);
  j.field("model", to_string(cfg.model));
  j.field("shape", to_string(cfg.shape));
  j.field("geometry", to_string(cfg.geometry));
  j.field("engine", to_string(cfg.engine));
  j.field("sweep", to_string(cfg.sweep));
  j.field("units", units);
  j.field("m", cfg.m);
  j.field("U", cfg.U);
  j.field("ell", cfg.ell);
  j.field("L", cfg.L);
  if (cfg.sweep == Sweep::Height) j.field("E", cfg.E);
  const auto [lo, hi] = cfg.window();
  j.field("lo", lo);
  j.field("hi", hi);
  j.field("samples", cfg.samples);
  j.field("average", cfg.average);
  j.field("precision_bits", cfg.precision_bits);
  j.field("tail_tolerance", cfg.tail_tolerance);
  j.end_object();
}

inline void write_point(JsonWriter& j, const ScanConfig& cfg, const ScanRecord& r) {
  j.begin_object();
  j.field("E_over_m", r.E / cfg.m);
  if (cfg.sweep == Sweep::Height) j.field("U_over_m", r.U / cfg.m);
  if (r.point) {
    const auto& p = *r.point;
    j.field("T", p.T);
    j.field("log10_T", p.log10_T);
    j.field("T_avg", p.T_avg);
    j.field("log10_T_avg", p.log10_T_avg);
    j.field("model", to_string(p.model));
    j.field("shape", to_string(p.shape));
    j.field("engine", to_string(p.engine));
  } else {
    for (const char* k : {"T", "log10_T", "T_avg", "log10_T_avg"}) {
      j.key(k);
      j.null();
    }
  }
  std::vector<std::string> flags = r.flags;
  if (r.point) flags.insert(flags.end(), r.point->flags.begin(), r.point->flags.end());
  j.strings("flags", flags);
  j.end_object();
}

inline std::string scan_json(const ScanConfig& cfg, const ScanResult& scan,
                             const std::string& units = "natural") {
  JsonWriter j;
  j.begin_object();
  j.field("schema_version", kSchemaVersion);
  write_config(j, cfg, units);
  j.key("points");
  j.begin_array();
  for (const auto& r : scan.records) write_point(j, cfg, r);
  j.end_array();
  j.strings("warnings", scan.warnings);
  j.end_object();
  return j.str();
}

}  // namespace kleinzone::io
