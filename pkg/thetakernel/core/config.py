"""
Configuration management for the theta kernel toolkit.
"""
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Numerical settings loaded from environment variables (prefix THETA_KERNEL_)."""

    # Lattice sums
    shell_cap: int = 200
    quiet_shells: int = 3
    kernel_eps: float = 1e-14
    coeff_eps: float = 1e-14
    exp_clamp: float = 700.0

    # Validation tolerances
    degeneracy_tol: float = 1e-12
    integrality_tol: float = 1e-9
    unit_tol: float = 1e-12

    # Hermite polynomials
    degree_cap: int = 60

    # Elliptic functions
    theta_rtol: float = 1e-16
    theta_max_terms: int = 100000
    product_radius: int = 40
    mu_tol: float = 1e-8

    # Zero counting and location
    contour_nodes: int = 64
    path_safety: float = 1e-6
    shift_retries: int = 8
    winding_tol: float = 0.05
    zero_grid: int = 40
    newton_max_iter: int = 50
    newton_tol: float = 1e-12
    dedupe_tol: float = 1e-6
    zero_tol: float = 1e-8
    identically_zero_tol: float = 1e-9
    xi_tol: float = 1e-8

    # Quadrature
    quad_nodes: int = 48

    # Application
    random_seed: int = 20240517
    log_level: str = "WARNING"
    app_name: str = "Theta Kernel"
    app_version: str = "1.0.0"

    model_config = SettingsConfigDict(
        env_prefix="THETA_KERNEL_",
        env_file=".env",
        case_sensitive=False,
        extra="ignore",
    )


# Global settings instance
settings = Settings()
