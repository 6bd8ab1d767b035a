#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "cumbia/bicluster.hpp"
#include "cumbia/dissimilarity.hpp"
#include "cumbia/embedding.hpp"
#include "cumbia/ingest.hpp"

namespace cumbia::io {

// Shortest decimal form that reads back to the same double.
std::string format_number(double v);

// Writes through a sibling temporary file and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

// Lowercase hex SHA-256 of the bytes.
std::string sha256_hex(const std::string& bytes);

std::string table_text(const DataMatrix& x, char delimiter = ',');

// Header: object_label,kind,coord_1..coord_d.
std::string embedding_text(const Embedding& e, char delimiter = ',');
// One signed eigenvalue per line, descending.
std::string spectrum_text(const VectorXd& eigenvalues);
// Header of "s:"/"v:"-prefixed labels; full symmetric matrix.
std::string dissimilarity_text(const JointDissimilarity& d, char delimiter = ',');
// Same columns as embedding_text; samples then variables.
std::string biplot_text(const BiplotCoordinates& b, char delimiter = ',');
// bicluster,step,n_samples,n_variables,samples,variables,sample_scores,variable_scores
// with ';'-joined lists; `x` supplies the labels the trace indices refer to.
std::string trace_header();
std::string trace_rows(const ShaveTrace& t, const DataMatrix& x, std::size_t bicluster = 0);
// index,kind,value,fraction; negatives carry fraction NA.
std::string scree_text(const std::vector<double>& spectrum, const Scree& s);

/// Two-column label,group file.
using LabelMap = std::map<std::string, std::string>;
LabelMap read_labels(const std::filesystem::path& path, char delimiter = ',');
std::string labels_text(const std::vector<std::string>& labels, const std::vector<std::string>& groups,
                        char delimiter = ',');

}  // namespace cumbia::io
