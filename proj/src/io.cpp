#include "cumbia/io.hpp"

#include <openssl/evp.h>
#include <unistd.h>

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

namespace cumbia::io {
namespace {

const char* kind_tag(ObjectKind k) { return k == ObjectKind::Sample ? "sample" : "variable"; }

void append_row(std::string& out, const std::string& label, const char* kind, const auto& row, char delim) {
  out += label;
  out += delim;
  out += kind;
  for (Eigen::Index k = 0; k < row.size(); ++k) {
    out += delim;
    out += format_number(row(k));
  }
  out += '\n';
}

void coord_header(std::string& out, Eigen::Index dims, char delim) {
  out += "object_label";
  out += delim;
  out += "kind";
  for (Eigen::Index k = 1; k <= dims; ++k) {
    out += delim;
    out += "coord_" + std::to_string(k);
  }
  out += '\n';
}

template <typename T, typename F>
std::string joined(const std::vector<T>& items, F&& fmt) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ';';
    out += fmt(items[i]);
  }
  return out;
}

}  // namespace

std::string format_number(double v) {
  std::array<char, 64> buf{};
  if (v == 0.0) v = 0.0;  // normalise -0
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + tmp.string() + "'");
    out << contents;
    out.flush();
    if (!out) throw InputError("failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw InputError("cannot move output into '" + path.string() + "': " + ec.message());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
    throw InvariantViolation("SHA-256 digest failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string table_text(const DataMatrix& x, char delim) {
  std::string out = "id";
  for (const auto& v : x.variable_labels()) {
    out += delim;
    out += v;
  }
  out += '\n';
  for (Eigen::Index i = 0; i < x.samples(); ++i) {
    out += x.sample_labels()[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < x.variables(); ++j) {
      out += delim;
      out += format_number(x.values()(i, j));
    }
    out += '\n';
  }
  return out;
}

std::string embedding_text(const Embedding& e, char delim) {
  std::string out;
  coord_header(out, e.dims_used(), delim);
  for (Eigen::Index i = 0; i < e.coordinates.rows(); ++i)
    append_row(out, e.labels[static_cast<std::size_t>(i)], kind_tag(e.kinds[static_cast<std::size_t>(i)]),
               e.coordinates.row(i), delim);
  return out;
}

std::string spectrum_text(const VectorXd& eigenvalues) {
  std::string out;
  for (Eigen::Index k = 0; k < eigenvalues.size(); ++k) out += format_number(eigenvalues(k)) + '\n';
  return out;
}

std::string dissimilarity_text(const JointDissimilarity& d, char delim) {
  std::string out = "object";
  auto prefixed = [&](std::size_t i) {
    return std::string(d.kinds[i] == ObjectKind::Sample ? "s:" : "v:") + d.labels[i];
  };
  for (std::size_t i = 0; i < d.labels.size(); ++i) {
    out += delim;
    out += prefixed(i);
  }
  out += '\n';
  for (Eigen::Index i = 0; i < d.values.rows(); ++i) {
    out += prefixed(static_cast<std::size_t>(i));
    for (Eigen::Index j = 0; j < d.values.cols(); ++j) {
      out += delim;
      out += format_number(d.values(i, j));
    }
    out += '\n';
  }
  return out;
}

std::string biplot_text(const BiplotCoordinates& b, char delim) {
  std::string out;
  coord_header(out, b.rank_used, delim);
  for (Eigen::Index i = 0; i < b.sample_coords.rows(); ++i)
    append_row(out, b.sample_labels[static_cast<std::size_t>(i)], "sample", b.sample_coords.row(i), delim);
  for (Eigen::Index j = 0; j < b.variable_coords.rows(); ++j)
    append_row(out, b.variable_labels[static_cast<std::size_t>(j)], "variable", b.variable_coords.row(j), delim);
  return out;
}

std::string trace_header() {
  return "bicluster,step,n_samples,n_variables,samples,variables,sample_scores,variable_scores\n";
}

std::string trace_rows(const ShaveTrace& t, const DataMatrix& x, std::size_t bicluster) {
  std::string out;
  auto sample_label = [&](Eigen::Index i) { return x.sample_labels()[static_cast<std::size_t>(i)]; };
  auto variable_label = [&](Eigen::Index j) { return x.variable_labels()[static_cast<std::size_t>(j)]; };
  for (std::size_t s = 0; s < t.steps.size(); ++s) {
    const auto& st = t.steps[s];
    out += std::to_string(bicluster) + ',' + std::to_string(s) + ',' + std::to_string(st.samples.size()) + ',' + std::to_string(st.variables.size()) +
           ',' + joined(st.samples, sample_label) + ',' + joined(st.variables, variable_label) + ',' +
           joined(st.sample_scores, format_number) + ',' + joined(st.variable_scores, format_number) + '\n';
  }
  return out;
}

std::string scree_text(const std::vector<double>& spectrum, const Scree& s) {
  std::string out = "index,kind,value,fraction\n";
  std::size_t pos = 0;
  std::size_t index = 1;
  for (double v : spectrum) {
    if (v > 0) {
      out += std::to_string(index) + ",positive," + format_number(v) + ',' + format_number(s.fractions[pos++]) + '\n';
    } else if (v < 0) {
      out += std::to_string(index) + ",negative," + format_number(v) + ",NA\n";
    } else {
      out += std::to_string(index) + ",zero,0,NA\n";
    }
    ++index;
  }
  return out;
}

LabelMap read_labels(const std::filesystem::path& path, char delim) {
  const std::string text = read_file(path);
  std::istringstream in(text);
  std::string line;
  LabelMap out;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto pos = line.find(delim);
    if (pos == std::string::npos || line.find(delim, pos + 1) != std::string::npos)
      throw InputError("label file line " + std::to_string(line_no) + ": expected 2 fields");
    if (line_no == 1 && line.substr(0, pos) == "label") continue;
    auto [it, inserted] = out.emplace(line.substr(0, pos), line.substr(pos + 1));
    if (!inserted) throw InputError("label file: duplicate label '" + it->first + "'");
  }
  return out;
}

std::string labels_text(const std::vector<std::string>& labels, const std::vector<std::string>& groups,
                        char delim) {
  if (labels.size() != groups.size()) throw ParameterError("label and group counts differ");
  std::string out = std::string("label") + delim + "group\n";
  for (std::size_t i = 0; i < labels.size(); ++i) out += labels[i] + delim + groups[i] + '\n';
  return out;
}

}  // namespace cumbia::io
