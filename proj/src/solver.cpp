#include "swelab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "swelab/errors.hpp"

namespace swelab::solver {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLatticeTol = 1e-9;  // [m] commensurability tolerance

bool commensurate(double length, double h) {
    const double n = std::round(length / h);
    return std::abs(length - n * h) <= kLatticeTol;
}

int lattice_count(double length, double h, const char* what) {
    if (!commensurate(length, h))
        throw MeshError(std::string(what) + " is not an integer multiple of element_size");
    return static_cast<int>(std::llround(length / h));
}

// 8x8 stiffness and viscous damping matrices of a square bilinear quad with
// selective reduced integration: full 2x2 Gauss on the deviatoric part,
// element-mean B on the 2D volumetric part (B-bar), which keeps the element
// usable at nu = 0.499.
struct ElementMatrices {
    std::array<double, 64> stiffness{};
    std::array<double, 64> viscous{};
};

ElementMatrices make_element_matrices(const RegionMaterial& m, double h) {
    const double E = m.youngs_modulus;
    const double nu = m.poisson_ratio;
    const double k2 = E / (2.0 * (1.0 - nu));  // plane-stress 2D bulk modulus

    // Plane-stress D, split as D = k2 * m m^T + D_dev with m = (1,1,0).
    double D[3][3] = {};
    const double c = E / (1.0 - nu * nu);
    D[0][0] = c;
    D[0][1] = c * nu;
    D[1][0] = c * nu;
    D[1][1] = c;
    D[2][2] = c * (1.0 - nu) / 2.0;
    double Ddev[3][3];
    const double mv[3] = {1.0, 1.0, 0.0};
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) Ddev[a][b] = D[a][b] - k2 * mv[a] * mv[b];

    // Deviatoric strain-rate viscosity (no bulk viscosity).
    double Dv[3][3] = {};
    Dv[0][0] = m.shear_viscosity;
    Dv[0][1] = -m.shear_viscosity;
    Dv[1][0] = -m.shear_viscosity;
    Dv[1][1] = m.shear_viscosity;
    Dv[2][2] = m.shear_viscosity;

    const double g = 1.0 / std::sqrt(3.0);
    const double gp[2] = {-g, g};
    // Corner order (0,0), (h,0), (h,h), (0,h).
    const double xn[4][2] = {{0, 0}, {h, 0}, {h, h}, {0, h}};

    auto b_matrix = [&](double xi, double eta, double B[3][8], double& detj) {
        const double dN[4][2] = {{-(1 - eta) / 4, -(1 - xi) / 4},
                                 {(1 - eta) / 4, -(1 + xi) / 4},
                                 {(1 + eta) / 4, (1 + xi) / 4},
                                 {-(1 + eta) / 4, (1 - xi) / 4}};
        double J[2][2] = {};
        for (int a = 0; a < 4; ++a)
            for (int r = 0; r < 2; ++r)
                for (int s = 0; s < 2; ++s) J[r][s] += xn[a][r] * dN[a][s];
        detj = J[0][0] * J[1][1] - J[0][1] * J[1][0];
        const double inv[2][2] = {{J[1][1] / detj, -J[0][1] / detj},
                                  {-J[1][0] / detj, J[0][0] / detj}};
        for (int a = 0; a < 4; ++a) {
            const double dx = dN[a][0] * inv[0][0] + dN[a][1] * inv[1][0];
            const double dy = dN[a][0] * inv[0][1] + dN[a][1] * inv[1][1];
            B[0][2 * a] = dx;
            B[0][2 * a + 1] = 0.0;
            B[1][2 * a] = 0.0;
            B[1][2 * a + 1] = dy;
            B[2][2 * a] = dy;
            B[2][2 * a + 1] = dx;
        }
    };

    ElementMatrices out;
    double Bbar[3][8] = {};
    double volume = 0.0;
    for (double xi : gp) {
        for (double eta : gp) {
            double B[3][8], detj;
            b_matrix(xi, eta, B, detj);
            for (int r = 0; r < 8; ++r)
                for (int s = 0; s < 8; ++s) {
                    double kk = 0.0, cc = 0.0;
                    for (int a = 0; a < 3; ++a)
                        for (int b = 0; b < 3; ++b) {
                            kk += B[a][r] * Ddev[a][b] * B[b][s];
                            cc += B[a][r] * Dv[a][b] * B[b][s];
                        }
                    out.stiffness[r * 8 + s] += kk * detj;
                    out.viscous[r * 8 + s] += cc * detj;
                }
            for (int a = 0; a < 3; ++a)
                for (int r = 0; r < 8; ++r) Bbar[a][r] += B[a][r] * detj;
            volume += detj;
        }
    }
    for (int a = 0; a < 3; ++a)
        for (int r = 0; r < 8; ++r) Bbar[a][r] /= volume;
    // Volumetric contribution k2 (m^T Bbar)^T (m^T Bbar) * V.
    double mb[8];
    for (int r = 0; r < 8; ++r) mb[r] = Bbar[0][r] + Bbar[1][r];
    for (int r = 0; r < 8; ++r)
        for (int s = 0; s < 8; ++s) out.stiffness[r * 8 + s] += k2 * mb[r] * mb[s] * volume;
    return out;
}

RegionMaterial from_elastic(const ElasticMaterial& m) {
    return {m.youngs_modulus, m.poisson_ratio, m.rho, 0.0, true};
}

RegionMaterial from_voigt(const dispersion::VoigtMaterial& m, double density) {
    const double E = 2.0 * (1.0 + kVoigtPoissonRatio) * m.mu1;
    return {E, kVoigtPoissonRatio, density, m.mu2, true};
}

// Rectangular block of one region on the shared lattice.
struct Block {
    int i0, i1, j0, j1;  // element index ranges
    Region region;
};

class LatticeMesher {
public:
    explicit LatticeMesher(double h) : h_(h) {}

    std::int32_t node(int i, int j) {
        const auto key = std::make_pair(i, j);
        auto it = ids_.find(key);
        if (it != ids_.end()) return it->second;
        const auto id = static_cast<std::int32_t>(xs_.size());
        ids_.emplace(key, id);
        xs_.push_back(i * h_);
        ys_.push_back(j * h_);
        return id;
    }

    std::int32_t find(int i, int j) const {
        auto it = ids_.find(std::make_pair(i, j));
        if (it == ids_.end()) throw MeshError("internal: lattice node not meshed");
        return it->second;
    }

    bool exists(int i, int j) const { return ids_.count(std::make_pair(i, j)) != 0; }

    void add_block(const Block& b, PhantomModel& model) {
        for (int j = b.j0; j < b.j1; ++j)
            for (int i = b.i0; i < b.i1; ++i) {
                model.elements.push_back({node(i, j), node(i + 1, j), node(i + 1, j + 1),
                                          node(i, j + 1)});
                model.element_region.push_back(static_cast<std::uint8_t>(b.region));
                ++model.region_counts[static_cast<std::size_t>(b.region)];
            }
    }

    void finalize(PhantomModel& model) {
        model.node_x = std::move(xs_);
        model.node_y = std::move(ys_);
    }

private:
    double h_;
    std::map<std::pair<int, int>, std::int32_t> ids_;
    std::vector<double> xs_, ys_;
};

void add_bottom_dashpots(PhantomModel& model, LatticeMesher& mesh, int i0, int i1, int j,
                         const RegionMaterial& mat, double h) {
    const double zp = mat.rho * mat.p_wave_speed();
    const double zs = mat.rho * mat.s_wave_speed();
    for (int i = i0; i <= i1; ++i) {
        const double trib = (i == i0 || i == i1) ? h / 2.0 : h;
        model.dashpots.push_back({mesh.find(i, j), zs * trib, zp * trib});
    }
}

void add_side_dashpots(PhantomModel& model, LatticeMesher& mesh, int i, int j0, int j1,
                       const RegionMaterial& mat, double h) {
    const double zp = mat.rho * mat.p_wave_speed();
    const double zs = mat.rho * mat.s_wave_speed();
    for (int j = j0; j <= j1; ++j) {
        const double trib = (j == j0 || j == j1) ? h / 2.0 : h;
        model.dashpots.push_back({mesh.find(i, j), zp * trib, zs * trib});
    }
}

// Dashpot coefficients accumulate; merge duplicates so corner nodes carry
// both edge contributions in a single entry.
void merge_dashpots(PhantomModel& model) {
    std::map<std::int32_t, std::pair<double, double>> acc;
    for (const auto& d : model.dashpots) {
        auto& v = acc[d.node];
        v.first += d.zx;
        v.second += d.zy;
    }
    model.dashpots.clear();
    for (const auto& [node, z] : acc) model.dashpots.push_back({node, z.first, z.second});
}

}  // namespace

void ElasticMaterial::validate() const {
    if (!std::isfinite(youngs_modulus) || youngs_modulus <= 0.0)
        throw DomainError("ElasticMaterial: Young's modulus must be positive");
    if (!(poisson_ratio >= 0.0) || poisson_ratio >= 0.5)
        throw DomainError("ElasticMaterial: Poisson ratio must be in [0, 0.5)");
    if (!std::isfinite(rho) || rho <= 0.0)
        throw DomainError("ElasticMaterial: density must be positive");
}

double SpongeSpec::solver_density() const {
    return use_effective_density ? material.rho / (1.0 + void_ratio) : material.rho;
}

void SpongeSpec::validate() const {
    material.validate();
    if (!(void_ratio >= 0.0)) throw DomainError("SpongeSpec: void ratio must be >= 0");
}

void PhantomGeometry::validate() const {
    for (double v : {pad_length, pad_height, sponge_length, sponge_height, element_size,
                     absorber_width})
        if (!std::isfinite(v) || v <= 0.0)
            throw DomainError("PhantomGeometry: lengths must be positive");
    if (!(gel_thickness >= 0.0) || !std::isfinite(gel_thickness))
        throw DomainError("PhantomGeometry: gel thickness must be >= 0");
    if (pad_length > sponge_length)
        throw DomainError("PhantomGeometry: pad cannot be longer than the sponge");
}

void Excitation::validate() const {
    if (!std::isfinite(frequency_hz) || frequency_hz <= 0.0)
        throw DomainError("Excitation: frequency must be positive");
    if (!(duration_s > 0.0)) throw DomainError("Excitation: duration must be positive");
    if (!(amplitude_m >= 0.0) || !std::isfinite(amplitude_m))
        throw DomainError("Excitation: amplitude must be >= 0");
    if (!(contact_width_m > 0.0)) throw DomainError("Excitation: contact width must be positive");
}

const char* region_name(Region r) {
    switch (r) {
        case Region::pad: return "pad";
        case Region::gel: return "gel";
        case Region::sponge: return "sponge";
        case Region::absorber: return "absorber";
    }
    return "?";
}

double RegionMaterial::p_wave_speed() const {
    return std::sqrt(youngs_modulus / (rho * (1.0 - poisson_ratio * poisson_ratio)));
}

double RegionMaterial::s_wave_speed() const {
    return std::sqrt(youngs_modulus / (2.0 * (1.0 + poisson_ratio) * rho));
}

PhantomModel build_model(const PhantomGeometry& g, const ElasticMaterial& pad,
                         const dispersion::VoigtMaterial& gel, const SpongeSpec& sponge,
                         double contact_width_m, double fixed_width_m) {
    g.validate();
    pad.validate();
    sponge.validate();
    if (g.gel_thickness > 0.0) gel.validate();
    if (!(contact_width_m > 0.0))
        throw DomainError("build_model: contact width must be positive");
    if (!(fixed_width_m > 0.0))
        throw DomainError("build_model: fixed segment width must be positive");

    const double h = g.element_size;
    const int n_sponge_x = lattice_count(g.sponge_length, h, "sponge length");
    const int n_sponge_y = lattice_count(g.sponge_height, h, "sponge height");
    const int n_pad_x = lattice_count(g.pad_length, h, "pad length");
    const int n_pad_y = lattice_count(g.pad_height, h, "pad height");
    const int n_abs = lattice_count(g.absorber_width, h, "absorber width");
    const int n_gel = g.gel_thickness > 0.0
                          ? lattice_count(g.gel_thickness, h, "gel thickness")
                          : 0;
    const int n_contact = lattice_count(contact_width_m, h, "contact width");
    const double pad_offset = (g.sponge_length - g.pad_length) / 2.0;
    const int i_pad0 = lattice_count(pad_offset, h, "pad centering offset");

    PhantomModel model;
    model.element_size = h;
    model.materials[static_cast<int>(Region::pad)] = from_elastic(pad);
    if (n_gel > 0)
        model.materials[static_cast<int>(Region::gel)] = from_voigt(gel, gel.rho);
    model.materials[static_cast<int>(Region::sponge)] =
        from_voigt(sponge.material, sponge.solver_density());
    model.materials[static_cast<int>(Region::absorber)] =
        model.materials[static_cast<int>(Region::sponge)];
    model.materials[static_cast<int>(Region::absorber)].active = true;

    // Lattice: j = 0 at the absorber bottom; sponge occupies [n_abs, n_abs+ny).
    LatticeMesher mesh(h);
    const int j_sponge0 = n_abs;
    const int j_sponge1 = n_abs + n_sponge_y;
    const int j_gel1 = j_sponge1 + n_gel;
    const int j_pad1 = j_gel1 + n_pad_y;
    mesh.add_block({0, n_sponge_x, 0, n_abs, Region::absorber}, model);
    mesh.add_block({0, n_sponge_x, j_sponge0, j_sponge1, Region::sponge}, model);
    if (n_gel > 0)
        mesh.add_block({i_pad0, i_pad0 + n_pad_x, j_sponge1, j_gel1, Region::gel}, model);
    mesh.add_block({i_pad0, i_pad0 + n_pad_x, j_gel1, j_pad1, Region::pad}, model);

    // Driven segment: leftmost contact_width of the pad top surface.
    for (int i = i_pad0; i <= i_pad0 + n_contact; ++i)
        model.driven_nodes.push_back(mesh.find(i, j_pad1));

    // Fixed segment: central fixed_width_m of the pad top surface.
    {
        const int n_fix = std::max(1, static_cast<int>(std::llround(fixed_width_m / h)));
        const int i_mid = i_pad0 + n_pad_x / 2;
        for (int i = i_mid - n_fix / 2; i <= i_mid - n_fix / 2 + n_fix; ++i)
            model.fixed_nodes.push_back(mesh.find(i, j_pad1));
    }
    for (auto d : model.driven_nodes)
        for (auto f : model.fixed_nodes)
            if (d == f) throw MeshError("driven and fixed node sets overlap");

    // Absorbing treatment: bottom of the absorber band plus its side columns.
    const auto& amat = model.materials[static_cast<int>(Region::absorber)];
    add_bottom_dashpots(model, mesh, 0, n_sponge_x, 0, amat, h);
    add_side_dashpots(model, mesh, 0, 0, n_abs, amat, h);
    add_side_dashpots(model, mesh, n_sponge_x, 0, n_abs, amat, h);
    merge_dashpots(model);

    for (int i = 0; i <= n_sponge_x; ++i)
        model.surface_nodes.push_back(mesh.find(i, j_sponge1));
    model.surface_y = g.sponge_height;
    model.source_center_x = pad_offset + contact_width_m / 2.0;

    mesh.finalize(model);
    return model;
}

PhantomModel build_half_space(double length, double height, double element_size,
                              const SpongeSpec& sponge, double absorber_width,
                              double contact_width_m) {
    sponge.validate();
    if (!(length > 0.0) || !(height > 0.0) || !(element_size > 0.0) || !(absorber_width > 0.0))
        throw DomainError("build_half_space: dimensions must be positive");
    const double h = element_size;
    const int nx = lattice_count(length, h, "length");
    const int ny = lattice_count(height, h, "height");
    const int n_abs = lattice_count(absorber_width, h, "absorber width");
    const int n_contact = lattice_count(contact_width_m, h, "contact width");

    PhantomModel model;
    model.element_size = h;
    model.materials[static_cast<int>(Region::sponge)] =
        from_voigt(sponge.material, sponge.solver_density());
    model.materials[static_cast<int>(Region::absorber)] =
        model.materials[static_cast<int>(Region::sponge)];

    LatticeMesher mesh(h);
    const int j_top = n_abs + ny;
    mesh.add_block({0, nx, 0, n_abs, Region::absorber}, model);
    mesh.add_block({0, nx, n_abs, j_top, Region::sponge}, model);

    for (int i = 0; i <= n_contact; ++i) model.driven_nodes.push_back(mesh.find(i, j_top));

    // Half-space emulation: absorb the bottom and both full side edges.
    const auto& amat = model.materials[static_cast<int>(Region::absorber)];
    add_bottom_dashpots(model, mesh, 0, nx, 0, amat, h);
    add_side_dashpots(model, mesh, 0, 0, j_top - 1, amat, h);
    add_side_dashpots(model, mesh, nx, 0, j_top - 1, amat, h);
    merge_dashpots(model);

    for (int i = 0; i <= nx; ++i) model.surface_nodes.push_back(mesh.find(i, j_top));
    model.surface_y = height;
    model.source_center_x = contact_width_m / 2.0;

    mesh.finalize(model);
    return model;
}

double stable_time_step(const PhantomModel& model, double cfl_factor) {
    if (!(cfl_factor > 0.0)) throw DomainError("stable_time_step: cfl factor must be positive");
    const double h = model.element_size;
    double dt = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < model.materials.size(); ++r) {
        const auto& m = model.materials[r];
        if (!m.active || model.region_counts[r] == 0) continue;
        const double cp = m.p_wave_speed();
        double factor = 1.0;
        if (m.shear_viscosity > 0.0) {
            const double mu1 = m.youngs_modulus / (2.0 * (1.0 + m.poisson_ratio));
            const double xi = m.shear_viscosity * (2.0 * cp / h) / (2.0 * mu1);
            factor = std::sqrt(1.0 + xi * xi) - xi;
        }
        dt = std::min(dt, h / cp * factor);
    }
    if (!std::isfinite(dt)) throw DomainError("stable_time_step: model has no active regions");
    return cfl_factor * dt;
}

std::string PhantomModel::summary() const {
    std::ostringstream os;
    os << "phantom model: " << n_nodes() << " nodes, " << n_elements() << " elements ("
       << element_size * 1000.0 << " mm)\n";
    for (std::size_t r = 0; r < region_counts.size(); ++r) {
        if (region_counts[r] == 0) continue;
        const auto& m = materials[r];
        os << "  " << region_name(static_cast<Region>(r)) << ": " << region_counts[r]
           << " elements, E=" << m.youngs_modulus << " Pa, nu=" << m.poisson_ratio
           << ", rho=" << m.rho << " kg/m3, mu2=" << m.shear_viscosity << " Pa.s\n";
    }
    os << "  driven nodes: " << driven_nodes.size() << ", fixed nodes: " << fixed_nodes.size()
       << ", dashpot nodes: " << dashpots.size() << "\n";
    os << "  stable dt (cfl 0.5): " << stable_time_step(*this, 0.5) << " s\n";
    return os.str();
}

namespace {

struct RecordingLayout {
    std::vector<std::int32_t> nodes;
    std::vector<double> positions;
};

RecordingLayout resolve_recording(const PhantomModel& model, const RecordingSpec& spec) {
    if (spec.position_count < 2) throw DomainError("recording: need at least 2 positions");
    if (!(spec.frame_rate_hz > 0.0)) throw DomainError("recording: frame rate must be positive");
    const double want_x = model.source_center_x + spec.start_offset_m;
    const auto& surf = model.surface_nodes;
    std::size_t start = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < surf.size(); ++i) {
        const double d = std::abs(model.node_x[surf[i]] - want_x);
        if (d < best) {
            best = d;
            start = i;
        }
    }
    if (start + spec.position_count > surf.size())
        throw DomainError("recording: sampled segment extends past the model surface");
    RecordingLayout out;
    for (std::size_t i = 0; i < spec.position_count; ++i) {
        out.nodes.push_back(surf[start + i]);
        out.positions.push_back(model.node_x[surf[start + i]]);
    }
    return out;
}

}  // namespace

SimulationTrace simulate_with_drive(const PhantomModel& model,
                                    const std::function<double(double)>& drive,
                                    double duration_s, double amplitude_bound_m,
                                    const SolverConfig& config) {
    if (!(duration_s > 0.0)) throw DomainError("simulate: duration must be positive");
    const RecordingLayout rec = resolve_recording(model, config.recording);
    const double frame_interval = 1.0 / config.recording.frame_rate_hz;
    const double dt0 = stable_time_step(model, config.cfl_factor);
    const auto nsub = static_cast<std::size_t>(std::ceil(frame_interval / dt0 - 1e-12));
    const double dt = frame_interval / static_cast<double>(nsub);
    const auto n_frames = static_cast<std::size_t>(std::llround(duration_s / frame_interval));
    if (n_frames == 0) throw DomainError("simulate: duration shorter than one frame");

    const std::size_t ndof = 2 * model.n_nodes();

    // Shared 8x8 matrices per region; elements are stored grouped by region.
    std::array<ElementMatrices, 4> em;
    for (std::size_t r = 0; r < 4; ++r)
        if (model.materials[r].active && model.region_counts[r] > 0)
            em[r] = make_element_matrices(model.materials[r], model.element_size);

    // Element DOF table and lumped mass.
    std::vector<std::int32_t> edof(model.n_elements() * 8);
    std::vector<double> inv_mass(ndof, 0.0);
    for (std::size_t e = 0; e < model.n_elements(); ++e) {
        const auto& nd = model.elements[e];
        const double mq =
            model.materials[model.element_region[e]].rho * model.element_size *
            model.element_size / 4.0;
        for (int a = 0; a < 4; ++a) {
            edof[e * 8 + 2 * a] = 2 * nd[a];
            edof[e * 8 + 2 * a + 1] = 2 * nd[a] + 1;
            inv_mass[2 * nd[a]] += mq;
            inv_mass[2 * nd[a] + 1] += mq;
        }
    }
    for (double& m : inv_mass) m = 1.0 / m;

    std::vector<double> u(ndof, 0.0), v(ndof, 0.0), force(ndof, 0.0);

    const double bound = config.bound_factor * std::max(amplitude_bound_m, 0.0);

    SimulationTrace trace;
    trace.dt = dt;
    trace.n_steps = n_frames * nsub;
    trace.record.positions_m = rec.positions;
    trace.record.frame_interval_s = frame_interval;
    trace.record.n_frames = n_frames;
    trace.record.samples.assign(rec.positions.size() * n_frames, 0.0);
    if (config.track_energy) {
        trace.kinetic_energy.reserve(n_frames);
        trace.strain_energy.reserve(n_frames);
    }

    double g_prev = drive(0.0);
    for (std::size_t step = 0; step < trace.n_steps; ++step) {
        std::fill(force.begin(), force.end(), 0.0);
        for (std::size_t e = 0; e < model.n_elements(); ++e) {
            const ElementMatrices& mats = em[model.element_region[e]];
            const std::int32_t* dof = &edof[e * 8];
            double ue[8], ve[8];
            for (int a = 0; a < 8; ++a) {
                ue[a] = u[dof[a]];
                ve[a] = v[dof[a]];
            }
            for (int r = 0; r < 8; ++r) {
                const double* kr = &mats.stiffness[r * 8];
                const double* cr = &mats.viscous[r * 8];
                double f = 0.0;
                for (int s = 0; s < 8; ++s) f += kr[s] * ue[s] + cr[s] * ve[s];
                force[dof[r]] += f;
            }
        }
        for (const auto& d : model.dashpots) {
            force[2 * d.node] += d.zx * v[2 * d.node];
            force[2 * d.node + 1] += d.zy * v[2 * d.node + 1];
        }

        for (std::size_t i = 0; i < ndof; ++i) {
            v[i] -= dt * force[i] * inv_mass[i];
            u[i] += dt * v[i];
        }

        const double t_next = static_cast<double>(step + 1) * dt;
        const double g = drive(t_next);
        const double gv = (g - g_prev) / dt;
        g_prev = g;
        for (auto n : model.driven_nodes) {
            u[2 * n + 1] = g;
            v[2 * n + 1] = gv;
        }
        for (auto n : model.fixed_nodes) {
            u[2 * n] = 0.0;
            u[2 * n + 1] = 0.0;
            v[2 * n] = 0.0;
            v[2 * n + 1] = 0.0;
        }

        if ((step + 1) % nsub == 0) {
            const std::size_t frame = (step + 1) / nsub - 1;
            for (std::size_t i = 0; i < rec.nodes.size(); ++i)
                trace.record.sample(i, frame) = u[2 * rec.nodes[i] + 1];
            for (std::size_t i = 0; i < ndof; ++i) {
                if (!std::isfinite(u[i]) || (bound > 0.0 && std::abs(u[i]) > bound))
                    throw InstabilityError("simulate: displacement unstable", step + 1);
            }
            if (config.track_energy) {
                double ke = 0.0;
                for (std::size_t i = 0; i < ndof; ++i) ke += 0.5 * v[i] * v[i] / inv_mass[i];
                double se = 0.0;
                for (std::size_t e = 0; e < model.n_elements(); ++e) {
                    const ElementMatrices& mats = em[model.element_region[e]];
                    const std::int32_t* dof = &edof[e * 8];
                    double ue[8];
                    for (int a = 0; a < 8; ++a) ue[a] = u[dof[a]];
                    for (int r = 0; r < 8; ++r) {
                        const double* kr = &mats.stiffness[r * 8];
                        double f = 0.0;
                        for (int s = 0; s < 8; ++s) f += kr[s] * ue[s];
                        se += 0.5 * ue[r] * f;
                    }
                }
                trace.kinetic_energy.push_back(ke);
                trace.strain_energy.push_back(se);
            }
        }
    }
    return trace;
}

WavefieldRecord simulate(const PhantomModel& model, const Excitation& excitation,
                         const SolverConfig& config) {
    excitation.validate();
    const double nyquist = 0.5 * config.recording.frame_rate_hz;
    if (excitation.frequency_hz >= nyquist)
        throw DomainError("simulate: excitation frequency at or above the recording Nyquist");

    const double f = excitation.frequency_hz;
    const double amp = excitation.amplitude_m;
    const double duration = excitation.duration_s;
    const double ramp_end = 1.0 / f;  // half-cycle cosine ramp over one period
    auto drive = [f, amp, duration, ramp_end](double t) {
        if (t <= 0.0 || t > duration) return 0.0;
        const double w = t < ramp_end ? 0.5 * (1.0 - std::cos(kPi * t / ramp_end)) : 1.0;
        return amp * w * std::sin(2.0 * kPi * f * t);
    };
    return simulate_with_drive(model, drive, duration, amp, config).record;
}

}  // namespace swelab::solver
