"""Simulated drone and scene.

Units are centimeters and degrees. Yaw 0 faces +y and grows clockwise when
viewed from above, so the heading vector is (sin yaw, cos yaw) and the body
left vector is (-cos yaw, sin yaw). The camera is a linear pinhole stand-in:
bearing and elevation offsets map linearly onto normalized image
coordinates, sizes shrink with range, and everything is clamped into (0,1).
"""

import json
import math
from dataclasses import dataclass, field

from .errors import ConfigError, SkillFault

CAMERA_HFOV = 80.0
CAMERA_VFOV = 60.0
RANGE_MIN = 30.0
RANGE_MAX = 800.0
EPS = 0.01

# simulated skill durations, used by the mission clock
SECONDS_PER_CM = 0.02
SECONDS_PER_DEG = 0.01
VISION_SECONDS = 0.05
PICTURE_SECONDS = 0.3

GOTO_ARRIVAL_CM = 60.0


@dataclass
class Pose:
    x: float = 0.0
    y: float = 0.0
    z: float = 100.0
    yaw: float = 0.0

    def normalize(self):
        self.yaw %= 360.0


@dataclass
class WorldObject:
    base_name: str
    instance_id: int
    position: tuple   # (x, y, z) cm
    extent: tuple     # (width, height) cm
    color: str = "gray"
    attributes: frozenset = frozenset()
    obstacle_radius: float = 0.0

    @property
    def label(self):
        return f"{self.base_name}_{self.instance_id}"


@dataclass
class DetectedObject:
    label: str
    cx: float
    cy: float
    w: float
    h: float
    color: str


@dataclass
class SuccessSpec:
    """Declarative mission success predicate carried by a world file."""
    kind: str            # near_object | picture_taken | log_contains | facing_object
    target: str = ""
    radius_cm: float = GOTO_ARRIVAL_CM
    text: str = ""
    tolerance_deg: float = 10.0


@dataclass
class WorldState:
    drone: Pose = field(default_factory=Pose)
    objects: list = field(default_factory=list)
    hfov: float = CAMERA_HFOV
    vfov: float = CAMERA_VFOV
    collision_log: list = field(default_factory=list)
    success: SuccessSpec = None
    policy_enabled: bool = False
    world_id: str = ""

    def find_object(self, name):
        """Match by full label first, then by base name (lowest id wins)."""
        best = None
        for obj in self.objects:
            if obj.label == name:
                return obj
            if obj.base_name == name and (best is None
                                          or obj.instance_id < best.instance_id):
                best = obj
        return best

    # -- geometry --------------------------------------------------------------

    def bearing_to(self, obj):
        """Absolute bearing of obj from the drone, degrees cw from +y."""
        dx = obj.position[0] - self.drone.x
        dy = obj.position[1] - self.drone.y
        return math.degrees(math.atan2(dx, dy)) % 360.0

    def range_to(self, obj):
        dx = obj.position[0] - self.drone.x
        dy = obj.position[1] - self.drone.y
        dz = obj.position[2] - self.drone.z
        return math.sqrt(dx * dx + dy * dy + dz * dz)

    def ground_distance_to(self, obj):
        dx = obj.position[0] - self.drone.x
        dy = obj.position[1] - self.drone.y
        return math.hypot(dx, dy)

    def _rel_bearing(self, obj):
        rel = (self.bearing_to(obj) - self.drone.yaw) % 360.0
        if rel > 180.0:
            rel -= 360.0
        return rel

    def _elevation(self, obj):
        dz = obj.position[2] - self.drone.z
        hdist = self.ground_distance_to(obj)
        return math.degrees(math.atan2(dz, hdist))

    def project(self, obj):
        """DetectedObject for obj, or None when outside the frustum."""
        rng = self.range_to(obj)
        if not (RANGE_MIN <= rng <= RANGE_MAX):
            return None
        rel = self._rel_bearing(obj)
        elev = self._elevation(obj)
        if abs(rel) > self.hfov / 2 or abs(elev) > self.vfov / 2:
            return None
        clamp = lambda v: min(max(v, EPS), 1.0 - EPS)
        cx = clamp(0.5 + rel / self.hfov)
        cy = clamp(0.5 - elev / self.vfov)
        w = clamp(obj.extent[0] / (2 * rng * math.tan(math.radians(self.hfov / 2))))
        h = clamp(obj.extent[1] / (2 * rng * math.tan(math.radians(self.vfov / 2))))
        return DetectedObject(obj.label, cx, cy, w, h, obj.color)

    def detect(self):
        dets = [d for d in (self.project(o) for o in self.objects) if d]
        dets.sort(key=lambda d: d.label)
        return dets

    def scene_description(self):
        parts = [f"name:{d.label},x:{d.cx:.2f},y:{d.cy:.2f},"
                 f"width:{d.w:.2f},height:{d.h:.2f},color:{d.color}"
                 for d in self.detect()]
        return "[" + ", ".join(parts) + "]"

    # -- motion ----------------------------------------------------------------

    def heading_vector(self):
        r = math.radians(self.drone.yaw)
        return math.sin(r), math.cos(r)

    def translate(self, kind, distance):
        """Move in the body frame; collisions stop at contact and raise."""
        hx, hy = self.heading_vector()
        lx, ly = -hy, hx  # body-left
        step = {
            "mf": (hx, hy, 0.0), "mb": (-hx, -hy, 0.0),
            "ml": (lx, ly, 0.0), "mr": (-lx, -ly, 0.0),
            "mu": (0.0, 0.0, 1.0), "md": (0.0, 0.0, -1.0),
        }[kind]
        dx, dy, dz = (c * distance for c in step)
        if dz == 0.0:
            hit = self._first_collision(dx, dy, distance)
            if hit is not None:
                obj, t = hit
                self.drone.x += dx * t
                self.drone.y += dy * t
                self.collision_log.append((obj.label, self.drone.x, self.drone.y))
                raise SkillFault(f"collision with {obj.label} during {kind}")
        self.drone.x += dx
        self.drone.y += dy
        self.drone.z += dz
        return True

    def _first_collision(self, dx, dy, distance):
        """Earliest obstacle contact along the 2D segment, as (obj, t)."""
        if distance <= 0:
            return None
        best = None
        px, py = self.drone.x, self.drone.y
        for obj in self.objects:
            r = obj.obstacle_radius
            if r <= 0:
                continue
            ox = obj.position[0] - px
            oy = obj.position[1] - py
            # quadratic |p + t*d - o|^2 = r^2 with d the full displacement
            a = dx * dx + dy * dy
            b = -2 * (dx * ox + dy * oy)
            c = ox * ox + oy * oy - r * r
            disc = b * b - 4 * a * c
            if disc < 0:
                continue
            t = (-b - math.sqrt(disc)) / (2 * a)
            if 0.0 <= t <= 1.0 and (best is None or t < best[1]):
                best = (obj, t)
        return best

    def turn(self, kind, degrees):
        delta = degrees if kind == "tc" else -degrees
        self.drone.yaw = (self.drone.yaw + delta) % 360.0
        return True


# -- backend ------------------------------------------------------------------

class SimBackend:
    """Binds low-level skill callable_ids to a WorldState.

    Motion and vision calls advance the run clock by the configured skill
    durations; log/picture feed the mission log and snapshot list.
    """

    def __init__(self, world, ctl, probe=None, snapshot_dir=None):
        self.world = world
        self.ctl = ctl
        self.probe = probe  # callable(question) -> Value, wired by controller
        self.snapshot_dir = snapshot_dir
        self.log_lines = []
        self.snapshots = []

    # movement

    def _move(self, kind, distance):
        if distance <= 0:
            raise SkillFault(f"{kind}: distance must be positive")
        self.ctl.clock.advance(distance * SECONDS_PER_CM)
        if kind == "mf":
            self.ctl.note_forward(distance)
        try:
            self.world.translate(kind, float(distance))
        finally:
            self._emit_drone_state()
        return True

    def move_forward(self, distance):
        return self._move("mf", distance)

    def move_backward(self, distance):
        return self._move("mb", distance)

    def move_left(self, distance):
        return self._move("ml", distance)

    def move_right(self, distance):
        return self._move("mr", distance)

    def move_up(self, distance):
        return self._move("mu", distance)

    def move_down(self, distance):
        return self._move("md", distance)

    def _turn(self, kind, degrees):
        if not 0 < degrees <= 360:
            raise SkillFault(f"{kind}: degrees must be in (0, 360]")
        self.ctl.clock.advance(degrees * SECONDS_PER_DEG)
        self.ctl.note_rotation(degrees)
        self.world.turn(kind, float(degrees))
        self._emit_drone_state()
        return True

    def turn_cw(self, degrees):
        return self._turn("tc", degrees)

    def turn_ccw(self, degrees):
        return self._turn("tu", degrees)

    # vision

    def _detection(self, object_name):
        self.ctl.clock.advance(VISION_SECONDS)
        obj = self.world.find_object(object_name)
        if obj is None:
            return None
        return self.world.project(obj)

    def is_visible(self, object_name):
        return self._detection(object_name) is not None

    def _geometry(self, object_name, fieldname):
        det = self._detection(object_name)
        if det is None:
            raise SkillFault(f"object {object_name!r} is not visible")
        return getattr(det, fieldname)

    def object_x(self, object_name):
        return self._geometry(object_name, "cx")

    def object_y(self, object_name):
        return self._geometry(object_name, "cy")

    def object_w(self, object_name):
        return self._geometry(object_name, "w")

    def object_h(self, object_name):
        return self._geometry(object_name, "h")

    # misc

    def log(self, text):
        self.log_lines.append(text)
        self.ctl.emit("log_emitted", {"text": text})
        return True

    def picture(self):
        self.ctl.clock.advance(PICTURE_SECONDS)
        path = self._write_snapshot()
        self.snapshots.append(path)
        return path

    def delay(self, milliseconds):
        if milliseconds < 0:
            raise SkillFault("delay: milliseconds must be non-negative")
        self.ctl.clock.advance(milliseconds / 1000.0)
        return True

    def query(self, question):
        if self.probe is None:
            raise SkillFault("no probe client configured")
        return self.probe(question)

    # helpers

    def _emit_drone_state(self):
        d = self.world.drone
        self.ctl.emit("drone_state", {"x": d.x, "y": d.y, "z": d.z, "yaw": d.yaw})

    def _write_snapshot(self):
        d = self.world.drone
        lines = [f"pose x={d.x:.1f} y={d.y:.1f} z={d.z:.1f} yaw={d.yaw:.1f}"]
        for det in self.world.detect():
            lines.append(f"{det.label} x={det.cx:.2f} y={det.cy:.2f} "
                         f"w={det.w:.2f} h={det.h:.2f} color={det.color}")
        text = "\n".join(lines) + "\n"
        if self.snapshot_dir is None:
            path = f"snapshot_{len(self.snapshots)}.snapshot"
        else:
            import os
            os.makedirs(self.snapshot_dir, exist_ok=True)
            path = os.path.join(self.snapshot_dir,
                                f"snapshot_{len(self.snapshots)}.snapshot")
            with open(path, "w") as fh:
                fh.write(text)
        return path


# -- world files ---------------------------------------------------------------

def load_world(config_text, world_id=""):
    try:
        data = json.loads(config_text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"world file is not valid JSON: {exc}") from exc
    try:
        drone = data.get("drone", {})
        pose = Pose(float(drone.get("x", 0.0)), float(drone.get("y", 0.0)),
                    float(drone.get("z", 100.0)), float(drone.get("yaw", 0.0)))
        pose.normalize()
        camera = data.get("camera", {})
        objects = []
        for spec in data.get("objects", []):
            objects.append(WorldObject(
                base_name=spec["name"],
                instance_id=int(spec.get("id", 1)),
                position=tuple(float(v) for v in spec["pos"]),
                extent=tuple(float(v) for v in spec.get("extent", [30, 30])),
                color=spec.get("color", "gray"),
                attributes=frozenset(spec.get("attrs", [])),
                obstacle_radius=float(spec.get("obstacle_radius", 0.0)),
            ))
        success = None
        if "success" in data:
            s = data["success"]
            success = SuccessSpec(
                kind=s["kind"],
                target=s.get("target", ""),
                radius_cm=float(s.get("radius_cm", GOTO_ARRIVAL_CM)),
                text=s.get("text", ""),
                tolerance_deg=float(s.get("tolerance_deg", 10.0)),
            )
        world = WorldState(
            drone=pose, objects=objects,
            hfov=float(camera.get("hfov", CAMERA_HFOV)),
            vfov=float(camera.get("vfov", CAMERA_VFOV)),
            success=success,
            policy_enabled=bool(data.get("policy", False)),
            world_id=world_id,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad world field: {exc}") from exc
    labels = [o.label for o in world.objects]
    if len(labels) != len(set(labels)):
        raise ConfigError("duplicate object labels in world file")
    return world


def evaluate_success(world, backend):
    """Score a finished mission against the world's success predicate."""
    spec = world.success
    if spec is None:
        return True
    if spec.kind == "near_object":
        obj = world.find_object(spec.target)
        if obj is None:
            return False
        return world.ground_distance_to(obj) <= spec.radius_cm
    if spec.kind == "picture_taken":
        return len(backend.snapshots) > 0
    if spec.kind == "log_contains":
        return any(spec.text in line for line in backend.log_lines)
    if spec.kind == "facing_object":
        obj = world.find_object(spec.target)
        if obj is None:
            return False
        rel = (world.bearing_to(obj) - world.drone.yaw) % 360.0
        if rel > 180.0:
            rel -= 360.0
        return abs(rel) <= spec.tolerance_deg
    raise ConfigError(f"unknown success kind {spec.kind!r}")
