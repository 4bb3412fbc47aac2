#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "rfmseg/pipeline.hpp"

namespace rfmseg {

/// Figure ids accepted by emit_plot_data:
///   fig3            segment shares          segment,count,percent
///   fig4            elbow curve             k,inertia
///   fig5 .. fig9    scatter per algorithm   x,y,label
///                   (kmeans, gmm, dbscan, birch, agglo)
///   fig7_kdistance  sorted k-distances      rank,distance
std::vector<std::string> plot_figure_ids();

/// Writes plotdata/<figure>.csv under the run's output directory from the
/// artifacts the run left behind, adds it to the manifest's artifact list
/// and returns its path. The first line is a '#' comment naming the
/// columns. Throws ConfigError for an unknown id or when the stage the
/// figure needs did not run.
std::filesystem::path emit_plot_data(RunManifest& m, std::string_view figure);

}  // namespace rfmseg
