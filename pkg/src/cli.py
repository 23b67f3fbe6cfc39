#!/usr/bin/env python3
"""
Command-line interface for screw-based task-oriented grasp synthesis.

Usage:
    screwgrasp gen-data --out data/ [--reduced]
    screwgrasp train --data data/train.csv --out model.sgm
    screwgrasp region --cloud obj.ply --screw px,py,pz,lx,ly,lz --model model.sgm
    screwgrasp poses --cloud obj.ply --screw ... --model model.sgm
    screwgrasp fge --cloud obj.ply --screw ... --model model.sgm
    screwgrasp trials --model model.sgm --objects 5 --screws 4
    screwgrasp scan --shape box --out box.ply
    screwgrasp metric --ci x,y,z --cj x,y,z --screw ...
    screwgrasp config [--dump]
    screwgrasp-trials --model model.sgm

Exit codes: 0 success, 1 usage, 2 data error, 3 numerical failure.
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np
import yaml

from src.config import RunConfig, load_config
from src.dataset.cuboids import generate_cuboid_family, label_family, reduced_subset
from src.dataset.export import export_dataset
from src.dataset.features import encode_samples
from src.errors import InfeasibleGraspError, ScrewGraspError, UsageError
from src.evaluation.fge import fge
from src.geometry.screw import parse_screw
from src.io.dataset_csv import read_dataset_csv, write_dataset_csv
from src.io.model_file import load_model, save_model
from src.io.obj import load_mesh
from src.io.ply import load_cloud, save_cloud
from src.io.reports import (plot_histogram, write_histogram_csv, write_object_table_csv,
                            write_report_json, write_trial_csv)
from src.metric.grasp_metric import environment_contacts, estimate_metric
from src.models.dataset import FeatureVariant
from src.models.geometry import AntipodalPair
from src.models.metric import FrictionModel, PhysicsModel
from src.models.results import FgeConfig, Severity
from src.models.scene import VirtualCamera
from src.pipeline.poses import pose_to_frame, poses_from_grid, poses_from_point
from src.pipeline.region import compute_region, compute_region_sequence
from src.pipeline.scorers import SurrogateScorer
from src.runner import TrialRunner
from src.surrogate.mlp import NORM_KINDS, MlpModel
from src.surrogate.training import TrainConfig, train
from src.synthetic.camera import render_partial_cloud
from src.synthetic.normals import estimate_normals
from src.synthetic.shapes import default_catalog, orbit_cameras
from src.validators.config_validator import ConfigValidator


class _Parser(argparse.ArgumentParser):
    """Argument errors raise UsageError so they share exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0,
                        help="-v for progress, -vv for solver detail")
    common.add_argument("--config", help="YAML/JSON config (default: $SCREWGRASP_CONFIG)")
    common.add_argument("--seed", type=int, help="Override every seed")
    common.add_argument("--jobs", type=int, help="Parallel workers (default: config jobs)")
    return common


def _add_cloud_screw(sub: argparse.ArgumentParser, multiple: bool = False):
    sub.add_argument("--cloud", required=True, help="Object point cloud (PLY)")
    if multiple:
        sub.add_argument("--screw", required=True, action="append",
                         help="Task screw px,py,pz,lx,ly,lz (repeat for a screw sequence)")
    else:
        sub.add_argument("--screw", required=True, help="Task screw px,py,pz,lx,ly,lz")
    sub.add_argument("--model", required=True, help="Model weight file")
    sub.add_argument("--y-th", type=float, help="Region threshold in [0, 1]")
    sub.add_argument("--policy", choices=["perpendicular", "aligned"],
                     help="Face-pair selection rule")


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = _Parser(
        description="Task-oriented antipodal grasp synthesis from point clouds",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Label the reduced cuboid dataset on 8 workers
  screwgrasp gen-data --out data/ --reduced --jobs 8

  # Train the surrogate
  screwgrasp train --data data/train.csv --val data/val.csv --out model.sgm

  # Ideal grasping region for pivoting about an edge
  screwgrasp region --cloud box.ply --screw 0.1,0,0,0,1,0 --model model.sgm

  # 5 objects x 4 random screws
  screwgrasp trials --model model.sgm --objects 5 --screws 4 --out trials/
        """
    )
    subparsers = parser.add_subparsers(dest="command", help="Command to run",
                                       parser_class=_Parser)

    gen = subparsers.add_parser("gen-data", parents=[common], help="Generate cuboid dataset")
    gen.add_argument("--out", required=True, help="Output directory")
    gen.add_argument("--reduced", action="store_true", help="Label a 12-cuboid subset")
    gen.add_argument("--variation", choices=["first", "full"], help="Cuboid family variation")

    tr = subparsers.add_parser("train", parents=[common], help="Train the surrogate")
    tr.add_argument("--data", required=True, help="Training CSV")
    tr.add_argument("--val", help="Validation CSV")
    tr.add_argument("--out", required=True, help="Model weight file to write")
    tr.add_argument("--epochs", type=int, help="Override train.epochs")
    tr.add_argument("--lr", type=float, help="Override train.lr")
    tr.add_argument("--ablation-norm", choices=NORM_KINDS, default="batch",
                    help="Normalisation layer (ablation only)")
    tr.add_argument("--no-skip", action="store_true", help="Disable skip connections (ablation)")

    reg = subparsers.add_parser("region", parents=[common], help="Ideal grasping region")
    _add_cloud_screw(reg, multiple=True)
    reg.add_argument("--out-ply", help="Scored cloud (PLY)")
    reg.add_argument("--out-json", help="Region indices and box (JSON)")

    pos = subparsers.add_parser("poses", parents=[common], help="End-effector poses")
    _add_cloud_screw(pos)
    pos.add_argument("--method", choices=["grid", "point"], default="grid",
                     help="grid: one pose per good cell; point: one pose seeded on the region")
    pos.add_argument("--out", help="Pose list (JSON)")

    fg = subparsers.add_parser("fge", parents=[common], help="Final grasp evaluation")
    _add_cloud_screw(fg)
    fg.add_argument("--top-k", type=int, help="Surrogate picks k")
    fg.add_argument("--top-m", type=int, help="Exact picks m")
    fg.add_argument("--env", action="append", default=[],
                    help="Environment contact x,y,z on the support plane (repeatable)")
    fg.add_argument("--no-gravity", action="store_true", help="Ignore the object weight")
    fg.add_argument("--out", help="Report (JSON)")

    tri = subparsers.add_parser("trials", parents=[common], help="Simulated trial batch")
    tri.add_argument("--model", required=True, help="Model weight file")
    tri.add_argument("--meshes", help="Directory of OBJ meshes (default: built-in shapes)")
    tri.add_argument("--objects", type=int, help="Number of objects to use")
    tri.add_argument("--screws", type=int, help="Task screws per object")
    tri.add_argument("--poses", type=int, help="Object poses per object")
    tri.add_argument("--out", default="trials", help="Output directory (default: trials)")
    tri.add_argument("--plot", action="store_true", help="Also render histogram.png")

    sc = subparsers.add_parser("scan", parents=[common], help="Synthetic partial scan")
    src_group = sc.add_mutually_exclusive_group(required=True)
    src_group.add_argument("--mesh", help="OBJ mesh")
    src_group.add_argument("--shape", choices=sorted(default_catalog()), help="Built-in shape")
    sc.add_argument("--eye", help="Camera position x,y,z (default: seeded orbit)")
    sc.add_argument("--normals", action="store_true", help="Estimate per-point normals")
    sc.add_argument("--out", required=True, help="Output cloud (PLY)")

    met = subparsers.add_parser("metric", parents=[common], help="Grasp metric of one pair")
    met.add_argument("--ci", required=True, help="Contact c_i x,y,z")
    met.add_argument("--cj", required=True, help="Contact c_j x,y,z")
    met.add_argument("--screw", required=True, help="Task screw px,py,pz,lx,ly,lz")
    met.add_argument("--mu", type=float, help="Fixed friction (default: sampled)")
    met.add_argument("--fmax", type=float, help="Robot normal-force limit (N)")
    met.add_argument("--com", help="Center of mass x,y,z (default: origin)")
    met.add_argument("--env", action="append", default=[],
                     help="Environment contact x,y,z on the support plane (repeatable)")
    met.add_argument("--no-gravity", action="store_true", help="Ignore the object weight")

    cf = subparsers.add_parser("config", parents=[common], help="Validate configuration")
    cf.add_argument("--dump", action="store_true", help="Print the effective configuration")

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main CLI entry point."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _setup_logging(getattr(args, "verbose", 0))
        if not args.command:
            parser.print_help()
            return 0
        return COMMANDS[args.command](args)
    except ScrewGraspError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


def _setup_logging(verbosity: int):
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


# ---------------------------------------------------------------- helpers

def _config(args, validate: bool = True) -> RunConfig:
    cfg = load_config(args.config, args.seed, validate=validate)
    if args.jobs is not None:
        if args.jobs < 1:
            raise UsageError("--jobs must be at least 1")
        cfg.jobs = args.jobs
    return cfg


def _vec3(text: str, option: str) -> np.ndarray:
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"{option} must be three comma-separated numbers: {text!r}") from exc
    if len(values) != 3:
        raise UsageError(f"{option} must be three comma-separated numbers: {text!r}")
    return np.array(values)


def _y_th(args, cfg: RunConfig) -> float:
    y_th = cfg.pipeline.y_th if args.y_th is None else args.y_th
    if not 0.0 <= y_th <= 1.0:
        raise UsageError(f"--y-th must lie in [0, 1], got {y_th}")
    return y_th


def _scorer(path: str, cfg: RunConfig) -> SurrogateScorer:
    return SurrogateScorer(load_model(path), FeatureVariant(cfg.train.feature_variant))


def _write_json(data, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2) + "\n")
    return path


def _banner(title: str):
    print(f"\n{'='*60}")
    print(title)
    print(f"{'='*60}")


def _fmt(value, spec: str = ".3f") -> str:
    return "n/a" if value is None else format(value, spec)


def _env_contacts(points: List[str], cfg: RunConfig):
    return environment_contacts([_vec3(p, "--env") for p in points], cfg.pipeline.support_normal,
                                cfg.friction.mu_env, cfg.physics.f_env_max)


# ---------------------------------------------------------------- commands

def cmd_gen_data(args) -> int:
    """Generate and label the cuboid dataset."""
    cfg = _config(args)
    d = cfg.dataset
    cuboids = generate_cuboid_family(np.linspace(d.length_min, d.length_max, d.steps),
                                     np.linspace(d.delta_min, d.delta_max, d.steps),
                                     d.width, d.height, args.variation or d.variation)
    if args.reduced:
        cuboids = reduced_subset(cuboids)
    print(f"Labeling {len(cuboids)} cuboid(s) on {cfg.jobs} worker(s)...")

    def progress(current, total, name):
        print(f"[{current}/{total}] {name}")

    samples = label_family(cuboids, (d.res_u, d.res_v), cfg.friction_model(),
                           cfg.physics_model(), cfg.jobs, progress_callback=progress)
    out = Path(args.out)
    full = write_dataset_csv(samples, out / "dataset.csv")
    train_path, val_path = export_dataset(samples, out, cfg.train.train_fraction, cfg.seeds.data)

    _banner("Dataset")
    print(f"Cuboids: {len(cuboids)}")
    print(f"Samples: {len(samples)}")
    print(f"Written: {full}, {train_path}, {val_path}")
    return 0


def cmd_train(args) -> int:
    """Train the surrogate on a dataset CSV."""
    cfg = _config(args)
    t = cfg.train
    variant = FeatureVariant(t.feature_variant)
    samples = read_dataset_csv(args.data)
    X = encode_samples(variant, samples)
    y = np.array([s.y for s in samples])
    X_val = y_val = None
    if args.val:
        val = read_dataset_csv(args.val)
        if val:
            X_val = encode_samples(variant, val)
            y_val = np.array([s.y for s in val])

    model = MlpModel(variant.length, t.hidden_width, t.n_hidden, args.ablation_norm,
                     not args.no_skip, seed=cfg.seeds.train)
    train_cfg = TrainConfig(lr=args.lr or t.lr, epochs=args.epochs or t.epochs,
                            batch_size=t.batch_size, seed=cfg.seeds.train)
    print(f"Training {model.describe()} on {len(samples)} samples...")

    def progress(epoch, total, loss):
        if epoch == total or epoch % 10 == 0:
            print(f"[{epoch}/{total}] loss {loss:.6f}")

    result = train(model, X, y, train_cfg, X_val, y_val, progress_callback=progress)
    path = save_model(model, args.out)

    _banner("Training")
    print(f"Final loss: {result.final_loss:.6f}")
    if result.val_losses:
        print(f"Validation loss: {result.val_losses[-1]:.6f}")
    print(f"Model: {path}")
    return 0


def cmd_region(args) -> int:
    """Ideal grasping region of a cloud."""
    cfg = _config(args)
    y_th = _y_th(args, cfg)
    cloud, _ = load_cloud(args.cloud)
    screws = [parse_screw(s) for s in args.screw]
    scorer = _scorer(args.model, cfg)
    options = dict(gripper=cfg.gripper_geometry(), support_normal=cfg.pipeline.support_normal,
                   res=cfg.grid_res, y_th=y_th, policy=args.policy or cfg.pipeline.face_policy)
    if len(screws) == 1:
        result = compute_region(cloud, screws[0], scorer, **options)
        region, results = result.region, [result]
        scores = result.scored.scores
    else:
        region, results = compute_region_sequence(cloud, screws, scorer, **options)
        scores = np.min([r.scored.scores for r in results], axis=0)

    if args.out_ply:
        save_cloud(cloud, args.out_ply, scores)
    if args.out_json:
        first = results[0]
        _write_json({
            "y_th": y_th,
            "indices": region.indices.tolist(),
            "scores": [round(float(s), 6) for s in region.scores],
            "closing_axis": first.closing_axis,
            "box": {"center": first.box.center.tolist(),
                    "rotation": first.box.rotation.tolist(),
                    "half_extents": first.box.half_extents.tolist()},
            "notes": sorted({n for r in results for n in r.notes}),
        }, args.out_json)

    _banner(f"Grasp region: {Path(args.cloud).name}")
    print(f"Points: {len(cloud)}")
    print(f"Region: {len(region)} point(s) at y_th={y_th:.2f}")
    print(f"Screws: {len(screws)}")
    return 0


def cmd_poses(args) -> int:
    """6-DOF poses from the region."""
    cfg = _config(args)
    y_th = _y_th(args, cfg)
    cloud, _ = load_cloud(args.cloud)
    result = compute_region(cloud, parse_screw(args.screw), _scorer(args.model, cfg),
                            cfg.gripper_geometry(), cfg.pipeline.support_normal, cfg.grid_res,
                            y_th, args.policy or cfg.pipeline.face_policy)
    gripper = cfg.gripper_geometry()
    if args.method == "grid":
        poses = poses_from_grid(result.field, result.scored, result.object_box, gripper, y_th)
    else:
        poses = [poses_from_point(result.region, result.object_cloud, result.object_box,
                                  gripper, cfg.seeds.eval, result.closing_axis)]
    to_world = result.frame.inverse()
    world = [pose_to_frame(p, to_world) for p in poses]
    if args.out:
        _write_json({"frame": "world", "poses": [p.as_dict() for p in world]}, args.out)

    _banner(f"Poses: {Path(args.cloud).name}")
    print(f"Method: {args.method}")
    print(f"Poses: {len(world)}")
    for pose in world[:3]:
        t = pose.translation
        print(f"  • center ({t[0]:.3f}, {t[1]:.3f}, {t[2]:.3f}) opening {pose.opening:.3f}")
    return 0


def cmd_fge(args) -> int:
    """Final grasp evaluation of one cloud and screw."""
    cfg = _config(args)
    y_th = _y_th(args, cfg)
    cloud, _ = load_cloud(args.cloud)
    fge_cfg = FgeConfig(args.top_k or cfg.evaluation.top_k, args.top_m or cfg.evaluation.top_m,
                        cfg.seeds.eval)
    physics = cfg.physics_model()
    if args.no_gravity:
        physics = physics.without_gravity()
    report = fge(cloud, parse_screw(args.screw), _scorer(args.model, cfg), fge_cfg,
                 env=_env_contacts(args.env, cfg), fm=cfg.friction_model(), physics=physics,
                 gripper=cfg.gripper_geometry(),
                 res=(cfg.evaluation.res_u, cfg.evaluation.res_v), y_th=y_th,
                 support_normal=cfg.pipeline.support_normal,
                 policy=args.policy or cfg.pipeline.face_policy,
                 object_id=Path(args.cloud).stem)
    if args.out:
        _write_json(report.as_dict(), args.out)

    _banner(f"FGE: {report.object_id}")
    print(f"y_max: {report.y_max:.3f} (k={report.top_k}, m={report.top_m})")
    print(f"Precision: {_fmt(report.precision)}")
    print(f"Spearman: {_fmt(report.spearman)}")
    return 0


def cmd_trials(args) -> int:
    """Simulated trial batch with histogram."""
    cfg = _config(args)
    if args.poses is not None:
        if args.poses < 1:
            raise UsageError("--poses must be at least 1")
        cfg.evaluation.poses_per_object = args.poses
    screws = args.screws or cfg.evaluation.screws_per_object
    runner = TrialRunner(_scorer(args.model, cfg), cfg)
    objects = runner.discover_objects(args.meshes, args.objects)
    print(f"Running {len(objects) * screws} trial(s) on {len(objects)} object(s)...\n")

    def progress(current, total, object_id):
        print(f"[{current}/{total}] {object_id}")

    reports = runner.run_trials(objects, screws, progress_callback=progress)
    scored = runner.aggregate_results(reports)

    out = Path(args.out)
    write_trial_csv(reports, out / "trials.csv")
    write_report_json(reports, scored, out / "trials.json")
    write_histogram_csv(scored["histogram"], out / "histogram.csv")
    write_object_table_csv(scored["per_object"], out / "objects.csv")
    if args.plot:
        plot_histogram(scored["histogram"], out / "histogram.png")

    summary = scored["summary"]
    _banner("Trial Summary")
    print(f"Total Trials: {summary['total_trials']}")
    print(f"Failed Trials: {summary['failed_trials']}")
    print(f"Median y_max: {_fmt(summary['median_y_max'])}")
    print(f"Fraction y_max >= {summary['good_threshold']}: {_fmt(summary['fraction_good'], '.2f')}")
    if scored["per_object"]:
        print("\nPer Object:")
        for row in scored["per_object"]:
            print(f"  • {row['object_id']}: mean {row['mean_y_max']:.3f} ({row['trials']} trials)")
    if scored["recommendations"]:
        print("\nRecommendations:")
        for rec in scored["recommendations"][:5]:
            print(f"  [{rec['severity'].upper()}] {rec['message']}")
    print(f"\nReports: {out}")
    return 0


def cmd_scan(args) -> int:
    """Render a partial point cloud of a mesh."""
    cfg = _config(args)
    mesh = load_mesh(args.mesh) if args.mesh else default_catalog()[args.shape]
    sc = cfg.scan
    camera_opts = dict(width=sc.width, height=sc.height, fov=np.deg2rad(sc.fov_deg),
                       noise_std=sc.noise_std)
    if args.eye:
        lo, hi = mesh.bounds
        cam = VirtualCamera.look_at(_vec3(args.eye, "--eye"), 0.5 * (lo + hi), **camera_opts)
    else:
        rng = np.random.default_rng(cfg.seeds.eval)
        cam = orbit_cameras(mesh, 1, rng, distance=sc.distance, **camera_opts)[0]
    cloud = render_partial_cloud(mesh, cam, cfg.seeds.eval)
    if args.normals:
        cloud = estimate_normals(cloud, k=sc.normal_k, viewpoint=cam.position)
    path = save_cloud(cloud, args.out)

    _banner(f"Scan: {mesh.name}")
    print(f"Points: {len(cloud)}")
    print(f"Camera: {np.round(cam.position, 3).tolist()}")
    print(f"Cloud: {path}")
    return 0


def cmd_metric(args) -> int:
    """Friction-averaged metric of a single antipodal pair."""
    cfg = _config(args)
    pair = AntipodalPair.from_points(_vec3(args.ci, "--ci"), _vec3(args.cj, "--cj"))
    screw = parse_screw(args.screw)
    p = cfg.physics
    physics = PhysicsModel(p.mass, np.array(p.gravity, dtype=float),
                           args.fmax if args.fmax is not None else p.f_normal_max, p.f_env_max)
    if args.no_gravity:
        physics = physics.without_gravity()
    fm = (FrictionModel.fixed(args.mu, cfg.friction.mu_env) if args.mu is not None
          else cfg.friction_model())
    com = _vec3(args.com, "--com") if args.com else None
    estimate = estimate_metric(pair, screw, _env_contacts(args.env, cfg), fm, com=com,
                               physics=physics)
    if estimate.n_feasible == 0:
        raise InfeasibleGraspError("no feasible grasp")

    _banner("Grasp metric")
    print(f"eta = {estimate.eta_mean:.6f}")
    print(f"Feasible draws: {estimate.n_feasible}/{estimate.n_draws}")
    return 0


def cmd_config(args) -> int:
    """Validate configuration and report issues."""
    cfg = _config(args, validate=False)
    result = ConfigValidator().validate(cfg)
    status = "✓" if result.valid else "✗"
    counts = result.counts
    print(f"{status} {result.source} ({counts[Severity.ERROR]} errors, "
          f"{counts[Severity.WARNING]} warnings)")
    for issue in result.all_issues:
        print(f"  └─ {issue.severity.value.upper()}: {issue.message}")
        if issue.suggestion:
            print(f"     {issue.suggestion}")
    if args.dump:
        print(yaml.safe_dump(cfg.as_dict(), sort_keys=False), end="")
    return 0 if result.valid else 1


COMMANDS = {
    "gen-data": cmd_gen_data,
    "train": cmd_train,
    "region": cmd_region,
    "poses": cmd_poses,
    "fge": cmd_fge,
    "trials": cmd_trials,
    "scan": cmd_scan,
    "metric": cmd_metric,
    "config": cmd_config,
}


def trials():
    """Entry point for 'screwgrasp-trials' command."""
    # Shortcut for trials command
    sys.argv.insert(1, "trials")
    return main()


if __name__ == "__main__":
    sys.exit(main())
