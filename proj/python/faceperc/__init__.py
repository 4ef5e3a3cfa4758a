"""Face percolation on planar random tessellations."""

from ._core import (
    Coloring,
    Estimate,
    GeneratorConfig,
    PalmTable,
    Tessellation,
    Window,
    archimedean_mean_euler,
    archimedean_vertex_intensity,
    build_tessellation,
    color,
    complement_coloring,
    covariance_planar_structure,
    density_cell_normal,
    estimate_covariance,
    estimate_density,
    estimate_palm,
    estimate_rho_voronoi,
    estimate_tau,
    euler_oracle_combinatorial,
    f_poly,
    g_poly,
    line_mean_euler,
    pv_variance_euler,
    render_svg,
    tessellation_from_json,
    tessellation_to_json,
    volumes_black_boundary,
    volumes_black_closed,
    volumes_black_interior,
    volumes_black_steiner,
)

__all__ = [name for name in dir() if not name.startswith("_")]
