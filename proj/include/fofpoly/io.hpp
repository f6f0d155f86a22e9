#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fofpoly/estimator.hpp"
#include "fofpoly/grid.hpp"
#include "fofpoly/synth.hpp"

namespace fofpoly {

// shortest round-trip decimal text for a double; stable across runs
std::string format_double(double value);

// Sample CSV layout: first row the grid points, one row of values per sample.
void write_samples_csv(const std::filesystem::path& path,
                       const std::vector<FunctionalSample>& samples);
std::vector<FunctionalSample> read_samples_csv(const std::filesystem::path& path);

void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m);

// Estimate bundle: coefficient matrix, training data, and a manifest carrying
// lambda, degree, family name and the file references.
void export_estimate(const std::filesystem::path& dir, const PolyRegEstimate& est);

// Oracle bundle: eigenvalues and eigenvector weights as CSV.
void export_oracle(const std::filesystem::path& dir, const OracleModel& oracle);

// Dataset bundle: inputs/responses CSV plus a manifest with the file refs.
void export_dataset(const std::filesystem::path& dir, const Dataset& data);

}  // namespace fofpoly
