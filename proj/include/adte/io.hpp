/*
 * Copyright 2026 The ADTE Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "adte/config.hpp"
#include "adte/error.hpp"
#include "adte/metrics.hpp"
#include "adte/record.hpp"

namespace adte {

inline constexpr std::string_view kFormatTag = "adte-logits";
inline constexpr std::uint32_t kFormatVersion = 1;
inline constexpr std::array<char, 4> kBinaryMagic = {'A', 'D', 'T', 'E'};

struct StreamHeader {
  std::string format_tag{kFormatTag};
  std::uint32_t version = kFormatVersion;
  std::size_t num_classes = 0;
  std::vector<std::string> class_names;

  void validate() const {
    detail::require(version == kFormatVersion, ErrorKind::unsupported_format,
                    "unsupported stream version " + std::to_string(version));
    detail::require(num_classes >= 2, ErrorKind::stream_format,
                    "header needs num_classes >= 2");
    detail::require(class_names.empty() || class_names.size() == num_classes,
                    ErrorKind::stream_format, "class_names length differs from num_classes");
  }

  friend bool operator==(const StreamHeader&, const StreamHeader&) = default;
};

/// Shortest text that parses back to the same double, always with a decimal
/// point or exponent ("1.0", not "1").
inline std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  std::string s(buf.data(), res.ptr);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

namespace detail {

inline std::string format_logit(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// JSONL streams
//
// Line 1:  {"format":"adte-logits","version":1,"num_classes":L,"class_names":[...]}
// Line k:  {"id":"...","label":3|null,"logits":[[...L numbers...], ...N rows...]}
// ---------------------------------------------------------------------------

class JsonlStreamReader {
 public:
  explicit JsonlStreamReader(std::istream& in) : in_(in) {
    std::string line;
    detail::require(static_cast<bool>(std::getline(in_, line)), ErrorKind::stream_format,
                    "line 1: missing header");
    line_no_ = 1;
    const auto j = parse_line(line);
    detail::require(j.is_object(), ErrorKind::stream_format, "line 1: header must be an object");
    try {
      header_.format_tag = j.at("format").get<std::string>();
      header_.version = j.at("version").get<std::uint32_t>();
      header_.num_classes = j.at("num_classes").get<std::size_t>();
      if (j.contains("class_names") && !j.at("class_names").is_null()) {
        header_.class_names = j.at("class_names").get<std::vector<std::string>>();
      }
    } catch (const nlohmann::json::exception& e) {
      detail::fail(ErrorKind::stream_format, "line 1: bad header: " + std::string(e.what()));
    }
    detail::require(header_.format_tag == kFormatTag, ErrorKind::unsupported_format,
                    "line 1: format tag '" + header_.format_tag + "'");
    header_.validate();
  }

  const StreamHeader& header() const noexcept { return header_; }

  std::optional<InstanceRecord> next() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      return parse_record(parse_line(line));
    }
    return std::nullopt;
  }

 private:
  nlohmann::json parse_line(const std::string& line) const {
    try {
      return nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      detail::fail(ErrorKind::stream_format,
                   "line " + std::to_string(line_no_) + ": malformed JSON: " + e.what());
    }
  }

  [[noreturn]] void bad(const std::string& what) const {
    detail::fail(ErrorKind::stream_format, "line " + std::to_string(line_no_) + ": " + what);
  }

  InstanceRecord parse_record(const nlohmann::json& j) const {
    if (!j.is_object()) bad("record must be an object");
    InstanceRecord rec;
    if (!j.contains("id") || !j["id"].is_string()) bad("record needs a string id");
    rec.id = j["id"].get<std::string>();
    if (j.contains("label") && !j["label"].is_null()) {
      const auto& lab = j["label"];
      if (!lab.is_number_integer()) bad("label must be an integer or null");
      const auto v = lab.get<std::int64_t>();
      if (v < 0 || static_cast<std::size_t>(v) >= header_.num_classes) bad("label out of range");
      rec.label = static_cast<std::size_t>(v);
    }
    if (!j.contains("logits") || !j["logits"].is_array() || j["logits"].empty()) {
      bad("record needs a non-empty logits array");
    }
    const std::size_t n = header_.num_classes;
    rec.num_classes = n;
    rec.num_views = j["logits"].size();
    rec.logits.reserve(rec.num_views * n);
    for (const auto& row : j["logits"]) {
      if (!row.is_array() || row.size() != n) {
        bad("logit row has " + std::to_string(row.is_array() ? row.size() : 0) +
            " entries, header says " + std::to_string(n));
      }
      for (const auto& z : row) {
        if (!z.is_number()) bad("logits must be numbers");
        const double v = z.get<double>();
        if (!std::isfinite(v)) bad("non-finite logit");
        rec.logits.push_back(v);
      }
    }
    return rec;
  }

  std::istream& in_;
  StreamHeader header_;
  std::size_t line_no_ = 0;
};

class JsonlStreamWriter {
 public:
  JsonlStreamWriter(std::ostream& out, StreamHeader header) : out_(out), header_(std::move(header)) {
    header_.validate();
    nlohmann::json h = {{"format", header_.format_tag},
                        {"version", header_.version},
                        {"num_classes", header_.num_classes}};
    if (!header_.class_names.empty()) h["class_names"] = header_.class_names;
    out_ << h.dump() << '\n';
  }

  void write(const InstanceRecord& rec) {
    detail::require(rec.num_classes == header_.num_classes, ErrorKind::invalid_input,
                    "record class count differs from header");
    std::string line = "{\"id\":" + nlohmann::json(rec.id).dump() + ",\"label\":";
    line += rec.label ? std::to_string(*rec.label) : "null";
    line += ",\"logits\":[";
    for (std::size_t v = 0; v < rec.num_views; ++v) {
      if (v) line += ',';
      line += '[';
      const auto row = rec.row(v);
      for (std::size_t l = 0; l < row.size(); ++l) {
        if (l) line += ',';
        line += detail::format_logit(row[l]);
      }
      line += ']';
    }
    line += "]}\n";
    out_ << line;
    detail::require(static_cast<bool>(out_), ErrorKind::io, "write failed");
  }

 private:
  std::ostream& out_;
  StreamHeader header_;
};

// ---------------------------------------------------------------------------
// Binary streams (all integers little-endian)
//
//   "ADTE" | u32 version | u32 L | u32 name_block_len | names (UTF-8, '\n'-separated)
//   per record: u32 id_len | id | i32 label (-1 = none) | u32 N | N*L f32 row-major
// ---------------------------------------------------------------------------

namespace detail {

inline void put_u32(std::string& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

inline std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace detail

class BinaryStreamReader {
 public:
  explicit BinaryStreamReader(std::istream& in) : in_(in) {
    std::array<unsigned char, 16> head{};
    if (!read_exact(head.data(), 4, "magic")) truncated("magic");
    detail::require(std::memcmp(head.data(), kBinaryMagic.data(), 4) == 0,
                    ErrorKind::unsupported_format, "bad magic bytes");
    if (!read_exact(head.data() + 4, 12, "header")) truncated("header");
    header_.version = detail::get_u32(head.data() + 4);
    detail::require(header_.version == kFormatVersion, ErrorKind::unsupported_format,
                    "unsupported stream version " + std::to_string(header_.version));
    header_.num_classes = detail::get_u32(head.data() + 8);
    const std::uint32_t names_len = detail::get_u32(head.data() + 12);
    std::string names(names_len, '\0');
    if (names_len && !read_exact(reinterpret_cast<unsigned char*>(names.data()), names_len,
                                 "class names")) {
      truncated("class names");
    }
    if (!names.empty()) {
      std::stringstream ss(names);
      for (std::string name; std::getline(ss, name, '\n');) header_.class_names.push_back(name);
    }
    try {
      header_.validate();
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::unsupported_format) throw;
      detail::fail(ErrorKind::stream_format, std::string("binary header: ") + e.what());
    }
  }

  const StreamHeader& header() const noexcept { return header_; }

  std::optional<InstanceRecord> next() {
    unsigned char word[4];
    const std::uint64_t record_start = offset_;
    const auto got = read_some(word, 4);
    if (got == 0) return std::nullopt;
    if (got < 4) truncated_at(record_start, "id length");

    InstanceRecord rec;
    rec.num_classes = header_.num_classes;
    const std::uint32_t id_len = detail::get_u32(word);
    rec.id.resize(id_len);
    if (id_len && !read_exact(reinterpret_cast<unsigned char*>(rec.id.data()), id_len, "id")) {
      truncated_at(record_start, "id");
    }
    if (!read_exact(word, 4, "label")) truncated_at(record_start, "label");
    const auto label = static_cast<std::int32_t>(detail::get_u32(word));
    if (label >= 0) rec.label = static_cast<std::size_t>(label);
    if (!read_exact(word, 4, "view count")) truncated_at(record_start, "view count");
    rec.num_views = detail::get_u32(word);
    detail::require(rec.num_views >= 1, ErrorKind::stream_format,
                    "record at byte " + std::to_string(record_start) + " has zero views");

    const std::size_t count = rec.num_views * rec.num_classes;
    std::vector<unsigned char> payload(count * 4);
    if (!read_exact(payload.data(), payload.size(), "logits")) truncated_at(record_start, "logits");
    rec.logits.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
      rec.logits[i] = static_cast<double>(std::bit_cast<float>(detail::get_u32(&payload[4 * i])));
    }
    try {
      rec.validate();
    } catch (const Error& e) {
      detail::fail(ErrorKind::stream_format,
                   "record at byte " + std::to_string(record_start) + ": " + e.what());
    }
    return rec;
  }

 private:
  std::size_t read_some(unsigned char* dst, std::size_t n) {
    in_.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
    const auto got = static_cast<std::size_t>(in_.gcount());
    offset_ += got;
    return got;
  }

  bool read_exact(unsigned char* dst, std::size_t n, const char*) { return read_some(dst, n) == n; }

  [[noreturn]] void truncated(const char* what) const {
    detail::fail(ErrorKind::stream_format,
                 std::string("truncated ") + what + " at byte " + std::to_string(offset_));
  }

  [[noreturn]] void truncated_at(std::uint64_t start, const char* what) const {
    detail::fail(ErrorKind::stream_format, "truncated record starting at byte " +
                                               std::to_string(start) + " (" + what +
                                               ", stream ends at byte " +
                                               std::to_string(offset_) + ")");
  }

  std::istream& in_;
  StreamHeader header_;
  std::uint64_t offset_ = 0;
};

class BinaryStreamWriter {
 public:
  BinaryStreamWriter(std::ostream& out, StreamHeader header) : out_(out), header_(std::move(header)) {
    header_.validate();
    std::string names;
    for (std::size_t i = 0; i < header_.class_names.size(); ++i) {
      if (i) names += '\n';
      names += header_.class_names[i];
    }
    std::string buf(kBinaryMagic.begin(), kBinaryMagic.end());
    detail::put_u32(buf, header_.version);
    detail::put_u32(buf, static_cast<std::uint32_t>(header_.num_classes));
    detail::put_u32(buf, static_cast<std::uint32_t>(names.size()));
    buf += names;
    flush(buf);
  }

  void write(const InstanceRecord& rec) {
    detail::require(rec.num_classes == header_.num_classes, ErrorKind::invalid_input,
                    "record class count differs from header");
    std::string buf;
    buf.reserve(12 + rec.id.size() + 4 * rec.logits.size());
    detail::put_u32(buf, static_cast<std::uint32_t>(rec.id.size()));
    buf += rec.id;
    const std::int32_t label = rec.label ? static_cast<std::int32_t>(*rec.label) : -1;
    detail::put_u32(buf, static_cast<std::uint32_t>(label));
    detail::put_u32(buf, static_cast<std::uint32_t>(rec.num_views));
    for (double z : rec.logits) detail::put_u32(buf, std::bit_cast<std::uint32_t>(static_cast<float>(z)));
    flush(buf);
  }

 private:
  void flush(const std::string& buf) {
    out_.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    detail::require(static_cast<bool>(out_), ErrorKind::io, "write failed");
  }

  std::ostream& out_;
  StreamHeader header_;
};

enum class StreamFormat { jsonl, binary };

/// A stream reader of either format, chosen by sniffing the magic bytes.
class StreamReader {
 public:
  explicit StreamReader(const std::string& path)
      : file_(std::make_unique<std::ifstream>(path, std::ios::binary)) {
    detail::require(file_->is_open(), ErrorKind::io, "cannot open '" + path + "'");
    std::array<char, 4> magic{};
    file_->read(magic.data(), 4);
    const bool binary = file_->gcount() == 4 && magic == kBinaryMagic;
    file_->clear();
    file_->seekg(0);
    if (binary) {
      format_ = StreamFormat::binary;
      binary_ = std::make_unique<BinaryStreamReader>(*file_);
    } else {
      format_ = StreamFormat::jsonl;
      jsonl_ = std::make_unique<JsonlStreamReader>(*file_);
    }
  }

  StreamFormat format() const noexcept { return format_; }
  const StreamHeader& header() const { return binary_ ? binary_->header() : jsonl_->header(); }
  std::optional<InstanceRecord> next() { return binary_ ? binary_->next() : jsonl_->next(); }

 private:
  std::unique_ptr<std::ifstream> file_;
  StreamFormat format_ = StreamFormat::jsonl;
  std::unique_ptr<BinaryStreamReader> binary_;
  std::unique_ptr<JsonlStreamReader> jsonl_;
};

/// Writes a stream file in the requested format.
inline void write_stream_file(const std::string& path, const StreamHeader& header,
                              std::span<const InstanceRecord> records, StreamFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  detail::require(out.is_open(), ErrorKind::io, "cannot open '" + path + "' for writing");
  if (format == StreamFormat::binary) {
    BinaryStreamWriter w(out, header);
    for (const auto& r : records) w.write(r);
  } else {
    JsonlStreamWriter w(out, header);
    for (const auto& r : records) w.write(r);
  }
  out.flush();
  detail::require(static_cast<bool>(out), ErrorKind::io, "write to '" + path + "' failed");
}

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

inline nlohmann::json config_to_json(const AdaptConfig& c) {
  return {{"n_views", c.n_views},
          {"filter_ratio", c.filter_ratio},
          {"bank_capacity", c.bank_capacity},
          {"jacobi_max_iter", c.jacobi_max_iter},
          {"jacobi_eps", c.jacobi_eps},
          {"q_alpha", c.q_alpha},
          {"q_beta", c.q_beta},
          {"measure", std::string(to_string(c.measure))},
          {"tsallis_q", c.tsallis_q},
          {"use_logit_adjustment", c.use_logit_adjustment},
          {"invert_q_mapping", c.invert_q_mapping},
          {"bias_refresh_period", c.bias_refresh_period},
          {"empty_column", std::string(to_string(c.empty_column))},
          {"bank_entry", std::string(to_string(c.bank_entry))}};
}

/// Missing keys keep their defaults; unknown keys and out-of-range values are
/// rejected with an error naming the key.
inline AdaptConfig load_config(const nlohmann::json& j) {
  detail::require(j.is_object(), ErrorKind::invalid_config, "config must be a JSON object");
  AdaptConfig c;
  const auto positive = [](const nlohmann::json& v, const std::string& key) {
    detail::require(v.is_number_integer() && v.get<std::int64_t>() >= 1,
                    ErrorKind::invalid_config, key + ": expected a positive integer");
    return v.get<std::size_t>();
  };
  const auto real = [](const nlohmann::json& v, const std::string& key) {
    detail::require(v.is_number(), ErrorKind::invalid_config, key + ": expected a number");
    return v.get<double>();
  };
  const auto boolean = [](const nlohmann::json& v, const std::string& key) {
    detail::require(v.is_boolean(), ErrorKind::invalid_config, key + ": expected a boolean");
    return v.get<bool>();
  };
  const auto text = [](const nlohmann::json& v, const std::string& key) {
    detail::require(v.is_string(), ErrorKind::invalid_config, key + ": expected a string");
    return v.get<std::string>();
  };
  for (const auto& [key, v] : j.items()) {
    if (key == "n_views") c.n_views = positive(v, key);
    else if (key == "filter_ratio") c.filter_ratio = real(v, key);
    else if (key == "bank_capacity") c.bank_capacity = positive(v, key);
    else if (key == "jacobi_max_iter") c.jacobi_max_iter = positive(v, key);
    else if (key == "jacobi_eps") c.jacobi_eps = real(v, key);
    else if (key == "q_alpha") c.q_alpha = real(v, key);
    else if (key == "q_beta") c.q_beta = real(v, key);
    else if (key == "measure") c.measure = parse_measure(text(v, key));
    else if (key == "tsallis_q") c.tsallis_q = real(v, key);
    else if (key == "use_logit_adjustment") c.use_logit_adjustment = boolean(v, key);
    else if (key == "invert_q_mapping") c.invert_q_mapping = boolean(v, key);
    else if (key == "bias_refresh_period") c.bias_refresh_period = positive(v, key);
    else if (key == "empty_column") c.empty_column = parse_empty_column(text(v, key));
    else if (key == "bank_entry") c.bank_entry = parse_bank_entry(text(v, key));
    else detail::fail(ErrorKind::invalid_config, key + ": unknown key");
  }
  try {
    c.validate();
  } catch (const Error& e) {
    // Re-tag q-interval errors with the offending key.
    const std::string what = e.what();
    if (what.find("q_alpha must be below q_beta") != std::string::npos) {
      detail::fail(ErrorKind::invalid_config, "q_alpha: must be below q_beta");
    }
    throw;
  }
  return c;
}

inline AdaptConfig load_config(std::istream& in) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    detail::fail(ErrorKind::invalid_config, std::string("config is not valid JSON: ") + e.what());
  }
  return load_config(j);
}

inline AdaptConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  detail::require(in.is_open(), ErrorKind::io, "cannot open config '" + path + "'");
  return load_config(in);
}

// ---------------------------------------------------------------------------
// Report CSV
//
//   # summary            key,value rows (instances, labeled, correct, accuracy,
//                        classes, log_bias_variance, mean_tcr@K, config.*)
//   # classes            class,count,correct,mean_confidence,mean_entropy
//   # buckets            bucket,first_rank,last_rank,classes,count,correct,accuracy,
//                        mean_confidence,mean_entropy,mean_true_prob
// ---------------------------------------------------------------------------

inline constexpr std::string_view kClassColumns =
    "class,count,correct,mean_confidence,mean_entropy";
inline constexpr std::string_view kBucketColumns =
    "bucket,first_rank,last_rank,classes,count,correct,accuracy,mean_confidence,mean_entropy,"
    "mean_true_prob";

inline void write_report_csv(const Report& r, std::ostream& out) {
  out << "# summary\nkey,value\n";
  out << "instances," << r.instances << '\n';
  if (r.instances > 0) {
    out << "labeled," << r.labeled << '\n';
    out << "correct," << r.correct << '\n';
    if (r.accuracy) out << "accuracy," << format_real(*r.accuracy) << '\n';
    out << "classes," << r.num_classes() << '\n';
    out << "log_bias_variance," << format_real(r.log_bias_variance()) << '\n';
    for (const auto& [k, v] : r.mean_tcr) out << "mean_tcr@" << k << ',' << format_real(v) << '\n';
    const nlohmann::json cfg = config_to_json(r.config_echo);
    for (const auto& [key, v] : cfg.items()) {
      out << "config." << key << ',' << (v.is_string() ? v.get<std::string>()
                                         : v.is_number_float() ? format_real(v.get<double>())
                                                               : v.dump())
          << '\n';
    }
  }
  out << "# classes\n" << kClassColumns << '\n';
  for (std::size_t l = 0; l < r.per_class.size(); ++l) {
    const auto& s = r.per_class[l];
    out << l << ',' << s.count << ',' << s.correct << ',' << format_real(s.mean_confidence())
        << ',' << format_real(s.mean_entropy()) << '\n';
  }
  out << "# buckets\n" << kBucketColumns << '\n';
  for (std::size_t b = 0; b < r.buckets.size(); ++b) {
    const auto& s = r.buckets[b];
    const auto acc = s.accuracy();
    out << b << ',' << s.first_rank << ',' << s.last_rank << ',' << s.classes << ',' << s.count
        << ',' << s.correct << ',' << (acc ? format_real(*acc) : "") << ','
        << format_real(s.mean_confidence) << ',' << format_real(s.mean_entropy) << ','
        << format_real(s.mean_true_prob) << '\n';
  }
  detail::require(static_cast<bool>(out), ErrorKind::io, "report write failed");
}

inline void write_report_csv(const Report& r, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  detail::require(out.is_open(), ErrorKind::io, "cannot open '" + path + "' for writing");
  write_report_csv(r, out);
}

/// A report as recovered from CSV: the summary map plus the two tables.
struct ReportTable {
  std::vector<std::pair<std::string, std::string>> summary;
  std::vector<std::vector<std::string>> classes;
  std::vector<std::vector<std::string>> buckets;

  std::optional<std::string> get(std::string_view key) const {
    for (const auto& [k, v] : summary) {
      if (k == key) return v;
    }
    return std::nullopt;
  }
};

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  for (char ch : line) {
    if (ch == ',') {
      cells.push_back(cell);
      cell.clear();
    } else if (ch != '\r') {
      cell += ch;
    }
  }
  cells.push_back(cell);
  return cells;
}

inline ReportTable read_report_csv(std::istream& in) {
  ReportTable t;
  enum class Section { none, summary, classes, buckets } section = Section::none;
  bool expect_columns = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      const auto name = line.substr(2);
      if (name == "summary") section = Section::summary;
      else if (name == "classes") section = Section::classes;
      else if (name == "buckets") section = Section::buckets;
      else detail::fail(ErrorKind::stream_format, "report line " + std::to_string(line_no) +
                                                      ": unknown section '" + name + "'");
      expect_columns = true;
      continue;
    }
    if (expect_columns) {
      expect_columns = false;
      continue;
    }
    auto cells = split_csv_line(line);
    switch (section) {
      case Section::summary:
        detail::require(cells.size() == 2, ErrorKind::stream_format,
                        "report line " + std::to_string(line_no) + ": expected key,value");
        t.summary.emplace_back(cells[0], cells[1]);
        break;
      case Section::classes: t.classes.push_back(std::move(cells)); break;
      case Section::buckets: t.buckets.push_back(std::move(cells)); break;
      case Section::none:
        detail::fail(ErrorKind::stream_format,
                     "report line " + std::to_string(line_no) + ": data before any section");
    }
  }
  return t;
}

inline ReportTable read_report_csv_file(const std::string& path) {
  std::ifstream in(path);
  detail::require(in.is_open(), ErrorKind::io, "cannot open report '" + path + "'");
  return read_report_csv(in);
}

}  // namespace adte
