"""
Trial Runner

Orchestrates object discovery, synthetic scanning, task-screw sampling,
parallel final grasp evaluation and result aggregation.
"""
import logging
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from src.config import RunConfig
from src.errors import ScrewGraspError, UsageError
from src.evaluation.fge import fge
from src.evaluation.screws import TaskScrew, sample_task_screw
from src.geometry.boxes import oriented_box_pca
from src.io.obj import load_mesh
from src.models.geometry import PointCloud, RigidTransform
from src.models.results import TrialReport
from src.models.scene import TriMesh
from src.scoring.trial_scorer import TrialScorer
from src.synthetic.camera import render_partial_cloud
from src.synthetic.shapes import default_catalog, orbit_cameras

logger = logging.getLogger(__name__)


@dataclass
class TrialObject:
    """An object to run trials on: a mesh to scan, or a ready-made cloud."""
    object_id: str
    mesh: Optional[TriMesh] = None
    cloud: Optional[PointCloud] = None

    def __post_init__(self):
        if (self.mesh is None) == (self.cloud is None):
            raise UsageError(f"{self.object_id}: give exactly one of mesh or cloud")


@dataclass
class TrialTask:
    """One scheduled trial: a world-frame cloud and a sampled task screw."""
    object_index: int
    object_id: str
    trial_index: int
    cloud: PointCloud
    task: TaskScrew


def _yaw(angle: float) -> RigidTransform:
    c, s = np.cos(angle), np.sin(angle)
    return RigidTransform(np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]), np.zeros(3))


class TrialRunner:
    """
    Runs the simulated-trial protocol:
    1. Object discovery (mesh directory or built-in catalogue)
    2. One partial scan per object pose
    3. Seeded task screws per object
    4. Parallel FGE, merged in object then trial order
    """

    def __init__(self, model, cfg: Optional[RunConfig] = None, max_workers: Optional[int] = None):
        """
        Args:
            model: trained MlpModel (or any scorer accepted by the region pipeline)
            cfg: run configuration; defaults when None
            max_workers: parallel trial threads, defaults to cfg.jobs
        """
        self.model = model
        self.cfg = cfg or RunConfig()
        self.max_workers = max_workers or self.cfg.jobs
        self.scorer = TrialScorer()

    def discover_objects(self, mesh_dir: Optional[str] = None,
                         count: Optional[int] = None) -> List[TrialObject]:
        """
        OBJ files of `mesh_dir` in name order, or the built-in catalogue.

        Args:
            mesh_dir: directory of *.obj meshes
            count: keep only the first `count` objects
        """
        if mesh_dir is not None:
            root = Path(mesh_dir)
            if not root.is_dir():
                raise UsageError(f"mesh directory not found: {root}")
            objects = [TrialObject(path.stem, mesh=load_mesh(path))
                       for path in sorted(root.glob("*.obj"))]
        else:
            objects = [TrialObject(name, mesh=mesh) for name, mesh in default_catalog().items()]
        if not objects:
            raise UsageError("no objects to run trials on")
        if count is not None:
            if count < 1 or count > len(objects):
                raise UsageError(f"requested {count} objects, {len(objects)} available")
            objects = objects[:count]
        return objects

    def scan(self, obj: TrialObject, object_index: int) -> List[PointCloud]:
        """World-frame clouds, one per object pose."""
        if obj.cloud is not None:
            return [obj.cloud]
        seed = self.cfg.seeds.eval
        n_poses = self.cfg.evaluation.poses_per_object
        rng = np.random.default_rng([seed, object_index])
        sc = self.cfg.scan
        clouds = []
        for pose in range(n_poses):
            placed = obj.mesh.transformed(_yaw(rng.uniform(0.0, 2.0 * np.pi)))
            cam = orbit_cameras(placed, 1, rng, distance=sc.distance, width=sc.width,
                                height=sc.height, fov=np.deg2rad(sc.fov_deg),
                                noise_std=sc.noise_std)[0]
            noise_seed = int(rng.integers(2 ** 31))
            clouds.append(render_partial_cloud(placed, cam, noise_seed))
            logger.debug("%s pose %d: %d points", obj.object_id, pose, len(clouds[-1]))
        return clouds

    def plan(self, objects: List[TrialObject], screws_per_object: int) -> List[TrialTask]:
        """Scan every object and draw its task screws; trials cycle over poses."""
        if screws_per_object < 1:
            raise UsageError("screws_per_object must be at least 1")
        fm = self.cfg.friction_model()
        physics = self.cfg.physics_model()
        normal = self.cfg.pipeline.support_normal
        tasks = []
        for obj_idx, obj in enumerate(objects):
            clouds = self.scan(obj, obj_idx)
            boxes = [oriented_box_pca(cloud, normal) for cloud in clouds]
            for trial in range(screws_per_object):
                pose = trial % len(clouds)
                rng = np.random.default_rng([self.cfg.seeds.eval, obj_idx, trial])
                task = sample_task_screw(boxes[pose], rng, fm, physics)
                tasks.append(TrialTask(obj_idx, obj.object_id, trial, clouds[pose], task))
        return tasks

    def run(self, task: TrialTask) -> TrialReport:
        """FGE for one planned trial."""
        cfg = self.cfg
        physics = cfg.physics_model()
        if not task.task.gravity:
            physics = physics.without_gravity()
        report = fge(task.cloud, task.task.screw, self.model, cfg.fge_config(),
                     env=task.task.env, fm=cfg.friction_model(), physics=physics,
                     gripper=cfg.gripper_geometry(),
                     res=(cfg.evaluation.res_u, cfg.evaluation.res_v),
                     y_th=cfg.pipeline.y_th, support_normal=cfg.pipeline.support_normal,
                     policy=cfg.pipeline.face_policy, object_id=task.object_id)
        report.screw_kind = task.task.kind
        report.trial_index = task.trial_index
        return report

    def run_all(
        self,
        tasks: List[TrialTask],
        progress_callback: Optional[Callable[[int, int, str], None]] = None
    ) -> List[TrialReport]:
        """
        Run planned trials in parallel.

        Args:
            tasks: output of plan()
            progress_callback: Optional callback(current, total, object_id)

        Returns:
            Reports in (object, trial) order; failed trials carry `error`
        """
        results = []
        total = len(tasks)
        with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            future_to_task = {executor.submit(self.run, task): task for task in tasks}
            completed = 0
            for future in as_completed(future_to_task):
                task = future_to_task[future]
                try:
                    report = future.result()
                except ScrewGraspError as e:
                    logger.warning("trial %s/%d failed: %s", task.object_id, task.trial_index, e)
                    report = TrialReport(
                        object_id=task.object_id, screw=task.task.screw, y_max=float("nan"),
                        etas=[], top_k=self.cfg.evaluation.top_k,
                        top_m=self.cfg.evaluation.top_m, screw_kind=task.task.kind,
                        trial_index=task.trial_index, error=str(e))
                results.append((task.object_index, task.trial_index, report))
                completed += 1
                if progress_callback:
                    progress_callback(completed, total, task.object_id)
        results.sort(key=lambda item: (item[0], item[1]))
        return [report for _, _, report in results]

    def run_trials(self, objects: List[TrialObject], screws_per_object: int,
                   progress_callback: Optional[Callable[[int, int, str], None]] = None
                   ) -> List[TrialReport]:
        started = time.perf_counter()
        reports = self.run_all(self.plan(objects, screws_per_object), progress_callback)
        logger.info("%d trials in %.1f s", len(reports), time.perf_counter() - started)
        return reports

    def aggregate_results(self, reports: List[TrialReport]) -> Dict[str, Any]:
        """Histogram, summary, per-object table and recommendations."""
        return self.scorer.score(reports)
