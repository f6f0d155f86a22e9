#include "fofpoly/io.hpp"

#include <charconv>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

namespace fofpoly {

std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

std::vector<double> parse_csv_row(const std::string& line) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    out.push_back(std::stod(cell));
  }
  return out;
}

void write_row(std::ofstream& out, const Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out << ',';
    out << format_double(v(i));
  }
  out << '\n';
}

}  // namespace

void write_samples_csv(const std::filesystem::path& path,
                       const std::vector<FunctionalSample>& samples) {
  require(!samples.empty(), errc::invalid_argument, "write_samples_csv: empty sample set");
  std::ofstream out(path);
  require(out.good(), errc::io_error, "cannot open " + path.string());
  write_row(out, samples.front().grid->points);
  for (const auto& s : samples) {
    require(same_grid(s.grid, samples.front().grid), errc::grid_mismatch,
            "write_samples_csv: mixed grids");
    write_row(out, s.values);
  }
}

std::vector<FunctionalSample> read_samples_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), errc::io_error, "cannot open " + path.string());
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), errc::io_error,
          "missing grid row in " + path.string());
  const std::vector<double> pts = parse_csv_row(line);
  require(pts.size() >= 2, errc::io_error, "grid row too short in " + path.string());
  const auto grid = make_grid(pts.front(), pts.back(), static_cast<int>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    require(std::abs(grid->points(static_cast<Eigen::Index>(i)) - pts[i]) < 1e-9,
            errc::io_error, "non-uniform grid in " + path.string());
  }
  std::vector<FunctionalSample> samples;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<double> vals = parse_csv_row(line);
    require(vals.size() == pts.size(), errc::io_error, "ragged row in " + path.string());
    FunctionalSample s{grid, Eigen::VectorXd(static_cast<Eigen::Index>(vals.size()))};
    for (std::size_t i = 0; i < vals.size(); ++i) s.values(static_cast<Eigen::Index>(i)) = vals[i];
    samples.push_back(std::move(s));
  }
  require(!samples.empty(), errc::io_error, "no samples in " + path.string());
  return samples;
}

void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
  std::ofstream out(path);
  require(out.good(), errc::io_error, "cannot open " + path.string());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

void export_estimate(const std::filesystem::path& dir, const PolyRegEstimate& est) {
  std::filesystem::create_directories(dir);
  write_matrix_csv(dir / "coeff.csv", est.coeff);
  write_samples_csv(dir / "inputs.csv", est.inputs);
  write_samples_csv(dir / "responses.csv", est.responses);
  nlohmann::ordered_json manifest;
  manifest["lambda"] = est.lambda;
  manifest["degree"] = est.degree;
  manifest["family"] = est.family.name();
  manifest["landweber_scale"] = est.landweber_scale;
  manifest["coeff"] = "coeff.csv";
  manifest["inputs"] = "inputs.csv";
  manifest["responses"] = "responses.csv";
  std::ofstream out(dir / "manifest.json");
  require(out.good(), errc::io_error, "cannot open manifest in " + dir.string());
  out << manifest.dump(2) << '\n';
}

void export_oracle(const std::filesystem::path& dir, const OracleModel& oracle) {
  std::filesystem::create_directories(dir);
  write_matrix_csv(dir / "eigenvalues.csv", oracle.eigenvalues);
  write_matrix_csv(dir / "weights.csv", oracle.weights);
  write_samples_csv(dir / "inputs.csv", oracle.inputs);
}

void export_dataset(const std::filesystem::path& dir, const Dataset& data) {
  std::filesystem::create_directories(dir);
  write_samples_csv(dir / "inputs.csv", data.inputs);
  write_samples_csv(dir / "responses.csv", data.responses);
  nlohmann::ordered_json manifest;
  manifest["samples"] = data.inputs.size();
  manifest["inputs"] = "inputs.csv";
  manifest["responses"] = "responses.csv";
  std::ofstream out(dir / "manifest.json");
  require(out.good(), errc::io_error, "cannot open manifest in " + dir.string());
  out << manifest.dump(2) << '\n';
}

}  // namespace fofpoly
