"""Rendering pipeline: geometry, orbit classification, color, determinism."""

import numpy as np
import pytest

from ndyn import (
    Polynomial,
    RenderConfig,
    catalog_entry,
    colorize,
    dynamical_plane,
    orbit_outcome,
    parameter_plane,
    resolve_workers,
    write_image,
    write_metadata,
)
from ndyn.planes import PlaneImage
from ndyn.poly import rat_make

Z_SQUARED = rat_make(Polynomial((0.0, 0.0, 1.0)), Polynomial((1.0,)))


def small_cfg(**kw):
    base = dict(window=(-2.0, 2.0, -2.0, 2.0), resolution=(16, 16),
                max_iter=60)
    base.update(kw)
    return RenderConfig(**base)


@pytest.mark.parametrize("bad", [
    dict(window=(1.0, 1.0, 0.0, 2.0)),
    dict(window=(0.0, 2.0, 3.0, 1.0)),
    dict(resolution=(0, 10)),
    dict(max_iter=0),
    dict(conv_radius=0.0),
    dict(mode="glow"),
])
def test_config_rejects_bad_values(bad):
    with pytest.raises(ValueError):
        small_cfg(**bad)


def test_pixel_centers_sample_cell_midpoints():
    cfg = RenderConfig(window=(0.0, 1.0, 0.0, 1.0), resolution=(4, 2))
    assert np.allclose(cfg.x_centers(), [0.125, 0.375, 0.625, 0.875])
    # top row first: largest imaginary part leads
    assert np.allclose(cfg.y_centers(), [0.75, 0.25])


def test_orbit_counts_applications_before_capture():
    cfg = small_cfg()
    # 0.5 -> .25 -> .0625 -> .0039 -> 1.5e-5, inside 1e-4 after 4 steps
    name, its = orbit_outcome(Z_SQUARED, 0.5, cfg)
    assert (name, its) == ("root-0", 4)
    name, its = orbit_outcome(Z_SQUARED, 2.0, cfg)
    assert name == "root-inf" and its == 5


def test_orbit_none_means_full_budget():
    cfg = small_cfg(max_iter=25)
    # the unit circle is invariant for z -> z^2, so |z0| = 1 never resolves
    name, its = orbit_outcome(Z_SQUARED, complex(np.cos(1.0), np.sin(1.0)),
                              cfg)
    assert name == "none"
    assert its == cfg.max_iter


def test_orbit_attractor_capture_and_origin_precedence():
    cfg = small_cfg()
    name, its = orbit_outcome(Z_SQUARED, 0.5, cfg, known_attractors=(0.5,))
    assert (name, its) == ("strange-attractor", 0)
    # a declared attractor sitting on the origin must not shadow root-0
    name, _ = orbit_outcome(Z_SQUARED, 0.5, cfg, known_attractors=(0.0,))
    assert name == "root-0"


def test_plane_separates_basins_of_the_power_map():
    cfg = small_cfg(resolution=(32, 32))
    img = dynamical_plane(Z_SQUARED, cfg)
    xs = cfg.x_centers()
    ys = cfg.y_centers()
    mod = np.abs(xs[None, :] + 1j * ys[:, None])
    codes = img.outcome
    assert np.all(codes[mod < 0.9] == 1)     # root-0
    assert np.all(codes[mod > 1.1] == 2)     # root-inf
    none_mask = codes == 0
    assert np.array_equal(img.iterations[none_mask],
                          np.full(none_mask.sum(), cfg.max_iter))


def test_worker_count_does_not_change_bytes():
    maps = dynamical_plane(
        Z_SQUARED,
        small_cfg(resolution=(40, 48), workers=1))
    multi = dynamical_plane(
        Z_SQUARED,
        small_cfg(resolution=(40, 48), workers=4))
    assert np.array_equal(maps.outcome, multi.outcome)
    assert np.array_equal(maps.iterations, multi.iterations)
    assert maps.rgb.tobytes() == multi.rgb.tobytes()


def test_resolve_workers_sources(monkeypatch):
    monkeypatch.setenv("NDYN_THREADS", "3")
    assert resolve_workers(small_cfg()) == 3
    assert resolve_workers(small_cfg(workers=2)) == 2
    monkeypatch.setenv("NDYN_THREADS", "not-a-number")
    assert resolve_workers(small_cfg()) >= 1


def _hand_image(outcome, iterations, cfg):
    return PlaneImage(cfg.width, cfg.height,
                      np.asarray(outcome, np.int8),
                      np.asarray(iterations, np.int32), cfg)


def test_speed_palette_keyframes():
    cfg = small_cfg(resolution=(6, 1), max_iter=100)
    img = _hand_image([[1, 1, 1, 1, 1, 0]],
                      [[0, 25, 50, 75, 100, 100]], cfg)
    rgb = colorize(img, "speed")
    expect = [(255, 0, 0), (255, 255, 0), (0, 255, 0),
              (0, 0, 255), (128, 128, 128), (0, 0, 0)]
    assert [tuple(px) for px in rgb[0]] == expect


def test_attractor_palette_green_ramp():
    cfg = small_cfg(resolution=(4, 1), max_iter=100)
    img = _hand_image([[3, 3, 1, 0]], [[0, 100, 0, 100]], cfg)
    rgb = colorize(img, "attractor")
    assert tuple(rgb[0, 0]) == (0, 255, 0)
    assert tuple(rgb[0, 1]) == (0, 96, 0)
    assert tuple(rgb[0, 2]) == (255, 0, 0)   # roots keep the speed ramp
    assert tuple(rgb[0, 3]) == (0, 0, 0)


def test_ppm_bytes(tmp_path):
    cfg = RenderConfig(window=(-1.0, 1.0, -1.0, 1.0), resolution=(2, 1),
                       max_iter=10)
    img = _hand_image([[1, 0]], [[0, 10]], cfg)
    path = tmp_path / "tiny.ppm"
    write_image(img, str(path))
    data = path.read_bytes()
    assert data == b"P6\n2 1\n255\n" + bytes((255, 0, 0, 0, 0, 0))
    with pytest.raises(ValueError):
        write_image(img, str(path), fmt="png")


def test_metadata_sidecar(tmp_path):
    cfg = small_cfg(resolution=(8, 8))
    img = dynamical_plane(Z_SQUARED, cfg)
    path = tmp_path / "tiny.meta"
    write_metadata(img, str(path), extra={"subject": "power map"})
    lines = path.read_text().splitlines()
    fields = dict(line.split("=", 1) for line in lines)
    assert fields["width"] == "8" and fields["height"] == "8"
    assert fields["x_min"] == "-2.0"
    assert fields["mode"] == "speed"
    assert fields["subject"] == "power map"
    total = sum(int(fields[f"count_{n}"])
                for n in ("none", "root_0", "root_inf", "strange_attractor"))
    assert total == 64
    # worker count must never leak into reproducible metadata
    assert not any(line.startswith("workers") for line in lines)


def test_affine_family_renders_vectorized():
    entry = catalog_entry("chebyshev-halley")
    cfg = RenderConfig(window=(-1.0, 5.0, -3.0, 3.0), resolution=(24, 24),
                       max_iter=60)
    img = parameter_plane(entry.stability_producer, cfg)
    assert img.diagnostics["vectorized"] is True
    assert img.diagnostics["no_free_critical"] == 0
    assert img.diagnostics["multiple_free_pairs"] == 0
    counts = img.counts()
    assert counts["root-0"] + counts["root-inf"] > 0


def test_known_attractors_mark_strange_pixels():
    entry = catalog_entry("os5")
    cfg = RenderConfig(window=(-10.5, 10.5, -10.5, 10.5),
                       resolution=(24, 24), max_iter=150)
    img = parameter_plane(entry.stability_producer, cfg,
                          known_attractors=(1.0, -1.0))
    assert img.counts()["strange-attractor"] > 0


def test_nonaffine_family_uses_scalar_path_deterministically():
    entry = catalog_entry("os3")
    base = dict(window=(-6.5, 3.5, -5.0, 5.0), resolution=(8, 8),
                max_iter=40)
    one = parameter_plane(entry.stability_producer,
                          RenderConfig(workers=1, **base))
    assert one.diagnostics["vectorized"] is False
    few = parameter_plane(entry.stability_producer,
                          RenderConfig(workers=3, **base))
    assert np.array_equal(one.outcome, few.outcome)
    assert np.array_equal(one.iterations, few.iterations)


def test_mirrored_seeds_land_in_mirrored_basins():
    form = catalog_entry("king").stability_producer(1.0)
    R = form.reconstruct()
    cfg = small_cfg(max_iter=500)
    mirror = {"root-0": "root-inf", "root-inf": "root-0",
              "none": "none", "strange-attractor": "strange-attractor"}
    for z in (0.3, 0.3 + 0.2j, 2.0, 5.0j, -0.7 + 0.1j):
        here, _ = orbit_outcome(R, z, cfg)
        there, _ = orbit_outcome(R, 1.0 / z, cfg)
        assert there == mirror[here], f"z={z}: {here} vs {there}"
