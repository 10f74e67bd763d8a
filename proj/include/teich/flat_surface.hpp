#pragma once

// Half-translation surfaces presented as Euclidean polygons with edge
// identifications, and their orientation double covers.
//
// Conventions:
//  * Polygons are listed counter-clockwise.  Edge k of a polygon runs from
//    vertex k to vertex k+1 (mod n); its vector is d_k = v_{k+1} - v_k.
//  * A pairing glues edge a to edge b reversing boundary direction, so
//    start(a) ~ end(b) and end(a) ~ start(b).  With flip=false the gluing
//    is z -> z + c and d_a = -d_b; with flip=true it is z -> -z + c and
//    d_a = d_b.
//  * The quadratic differential is dz^2 on every polygon.

#include <complex>
#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "teich/torus.hpp"

namespace teich::flat {

/// Absolute tolerance for matching edge vectors in gluing validation.
inline constexpr double kGluingTolerance = 1e-9;

class GluingError : public DomainError {
 public:
  using DomainError::DomainError;
};

struct EdgeRef {
  int polygon = 0;
  int edge = 0;
  friend bool operator==(const EdgeRef&, const EdgeRef&) = default;
};

struct Pairing {
  EdgeRef a;
  EdgeRef b;
  bool flip = false;
};

struct GluingData {
  std::vector<std::vector<cplx>> polygons;
  std::vector<Pairing> pairings;
};

GluingData gluing_from_json(const nlohmann::json& j);
nlohmann::json gluing_to_json(const GluingData& g);
GluingData load_gluing(const std::filesystem::path& path);

/// A vertex orbit of the glued complex.
struct ConePoint {
  std::vector<EdgeRef> corners;  // (polygon, vertex index) pairs in the orbit
  double angle = 0.0;            // total angle, radians
  int multiple = 0;              // angle / pi, rounded
};

/// A glued polygon complex with its flat cone metric.  Edge classes are
/// indexed like the pairings; class e is oriented along its `a` side.
class FlatSurface {
 public:
  const GluingData& gluing() const { return gluing_; }
  const std::vector<ConePoint>& cone_points() const { return cones_; }
  int genus() const { return genus_; }
  int euler_characteristic() const { return euler_; }
  /// Number of cone points of angle pi (simple poles).
  int punctures() const;
  double area() const { return area_; }

  std::size_t num_vertices() const { return cones_.size(); }
  std::size_t num_edges() const { return gluing_.pairings.size(); }
  std::size_t num_faces() const { return gluing_.polygons.size(); }

  /// Vertex orbit containing polygon p's vertex k.
  int vertex_orbit(int p, int k) const { return corner_orbit_[p][k]; }
  /// Edge class of polygon p's edge k, and +1 / -1 when that side is the
  /// class's a / b side.
  int edge_class(int p, int k) const { return edge_class_[p][k]; }
  int edge_sign(int p, int k) const { return edge_sign_[p][k]; }

  /// Vector of edge class e along its orientation.
  cplx edge_vector(std::size_t e) const;
  /// Orbits at the start and end of edge class e.
  int edge_start(std::size_t e) const;
  int edge_end(std::size_t e) const;

  bool has_flips() const;

  /// Sum over cone points of (2 pi - angle) minus 2 pi chi.
  double gauss_bonnet_defect() const;

  /// Connected components; greater than 1 only for orientable double covers.
  int components() const { return components_; }

  friend FlatSurface build(const GluingData& g, bool allow_disconnected);

 private:
  GluingData gluing_;
  std::vector<ConePoint> cones_;
  std::vector<std::vector<int>> corner_orbit_;
  std::vector<std::vector<int>> edge_class_;
  std::vector<std::vector<int>> edge_sign_;
  int genus_ = 0;
  int euler_ = 0;
  int components_ = 1;
  double area_ = 0.0;
};

/// Validates the gluing and builds the cell complex.  Throws GluingError
/// for mismatched edges, clockwise or non-simple polygons, edges used
/// zero or several times, and (unless allowed) disconnected complexes.
/// For a disconnected complex genus() is the sum over components.
FlatSurface build(const GluingData& g, bool allow_disconnected = false);

struct GenericityResult {
  bool generic = false;
  std::vector<int> witnesses;  // indices into cone_points()
};

/// Generic iff every cone angle is pi, 2 pi or 3 pi.
GenericityResult check_generic(const FlatSurface& s);

/// Applies a real-linear map z -> alpha z + beta conj(z) to every vertex.
/// The map must preserve orientation (|alpha| > |beta|).
struct RealLinearMap {
  cplx alpha{1.0, 0.0};
  cplx beta{0.0, 0.0};
  cplx operator()(cplx z) const { return alpha * z + beta * std::conj(z); }
  double determinant() const { return std::norm(alpha) - std::norm(beta); }
};

FlatSurface transform(const FlatSurface& s, const RealLinearMap& m);

/// z -> z + lambda conj(z).  Requires |lambda| < 1.
RealLinearMap teich_disk_map(cplx lambda);
/// (x, y) -> (x, shear x + stretch y).  Requires stretch > 0.
RealLinearMap vertical_shear_map(double shear, double stretch);

FlatSurface teich_disk_deform(const FlatSurface& s, cplx lambda);
FlatSurface vertical_preserving_shear(const FlatSurface& s, double shear, double stretch);
FlatSurface scale(const FlatSurface& s, double factor);

/// Scale c with Re(c dw) = Re(dz) for w = z + lambda conj(z): the
/// Hubbard-Masur differential of the original vertical foliation at the
/// deformed point is (c dw)^2.
cplx teich_disk_rescaling(cplx lambda);

/// area |1 - lambda|^2 / (1 - |lambda|^2).
double teich_disk_ext_formula(double area, cplx lambda);

}  // namespace teich::flat
