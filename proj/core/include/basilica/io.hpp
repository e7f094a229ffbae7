#pragma once

#include "basilica/cells.hpp"
#include "basilica/decimation.hpp"
#include "basilica/forms.hpp"
#include "basilica/geometry.hpp"
#include "basilica/graphdir.hpp"
#include "basilica/spectra.hpp"

#include <string>
#include <vector>

namespace basilica::io {

/// Floating-point rendering used in every emitted document: 17 significant
/// digits, so regression diffs are exact.
std::string fmt(double v);

std::string graph_json(const cells::Multigraph& g);
std::string graph_json(const graphdir::LabeledGraph& g);

std::string spectrum_json(const decimation::GraphSpectrum& spec);
std::string fractal_spectrum_json(const std::vector<spectra::FractalAtom>& atoms);
std::string eigenvalues_csv(const std::vector<double>& values);
std::string counting_csv(const std::vector<std::pair<double, long long>>& atoms);

std::string eigenfunction_csv(const std::vector<std::vector<double>>& basis);

/// CSV rows "address,resistance" over the arc edges of a network.
std::string resistances_csv(const forms::Network& net);

std::string layout_csv(const std::vector<std::array<double, 2>>& pos);
std::string scatter_csv(const std::vector<geometry::Complex>& pts);

void write_file(const std::string& path, const std::string& content);

} // namespace basilica::io
