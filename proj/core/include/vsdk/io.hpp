#ifndef VSDK_IO_HPP
#define VSDK_IO_HPP

#include <Eigen/Core>
#include <string>
#include <vector>

#include "vsdk/geometry.hpp"
#include "vsdk/interpolation.hpp"
#include "vsdk/segmentation.hpp"

namespace vsdk {

/// Shortest decimal form that round-trips a double exactly (17 significant
/// digits); used for every floating-point field written by the toolkit.
std::string fmt_g17(double v);

/// Writes content to `path` via a temporary file plus rename, so readers
/// never observe a half-written file.
void atomic_write(const std::string& path, const std::string& content);

/// Plain-node CSV, header `x,y`. Full 17-digit precision; write-then-read is
/// bitwise identity. Readers raise ParseError (with the line number) on
/// malformed rows and reject non-finite entries; writers raise DomainError
/// on non-finite input. Missing files raise ParameterError.
void write_nodes_csv(const std::string& path, const NodeSet& nodes);
NodeSet read_nodes_csv(const std::string& path);

/// Sampled-data CSV, header `x,y,f`.
void write_data_csv(const std::string& path, const NodeSet& nodes, const Eigen::VectorXd& values);
DataSet read_data_csv(const std::string& path);

/// Evaluation CSV, header `x,y,v` (reconstruction values on a point set).
void write_eval_csv(const std::string& path, const NodeSet& points, const Eigen::VectorXd& values);
DataSet read_eval_csv(const std::string& path);

/// Labeled-data CSV, header `x,y,z` with integer class labels.
void write_labels_csv(const std::string& path, const LabeledData& data);
LabeledData read_labels_csv(const std::string& path);

/// 8-bit grayscale raster of real values. Row-major with row 0 at the top
/// (y = +1 for images of [-1,1]^2); [vmin, vmax] maps linearly onto 0..255.
/// Display-only: quantization makes PGM round-trips lossy by design.
struct GridImage {
    int width = 0;
    int height = 0;
    std::vector<double> values;
    double vmin = 0.0;
    double vmax = 1.0;
};

/// Reshapes values sampled on uniform_grid(M) (x fastest, y ascending) into
/// an image, flipping rows so north is up; vmin/vmax snap to the data range.
GridImage image_from_grid_values(const Eigen::VectorXd& values, int M);

/// PGM writer (binary P5 by default, ASCII P2 otherwise), maxval 255, with
/// the value range recorded in a `# range min=<v> max=<v>` header comment.
void write_pgm(const std::string& path, const GridImage& image, bool binary = true);

/// Reads P2/P5, mapping gray levels back through the range comment when
/// present ([0,1] otherwise).
GridImage read_pgm(const std::string& path);

/// Classifier model persistence as JSON:
/// {C, kernel, bias, bias_from_midpoint, support:[{x,y,z,beta}]}.
void save_svm_model(const std::string& path, const SvmModel& model);
SvmModel load_svm_model(const std::string& path);

/// One-vs-rest ensemble persistence: {classes:[...], models:[<model>...]}
/// with each model in the save_svm_model layout.
void save_svm_ensemble(const std::string& path, const MulticlassSvm& ensemble);
MulticlassSvm load_svm_ensemble(const std::string& path);

} // namespace vsdk

#endif
