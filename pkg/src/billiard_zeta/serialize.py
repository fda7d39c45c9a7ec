"""Scene JSON and CSV/JSON output helpers."""
import csv
import io
import json
import math

import numpy as np

from .geometry import GeometryError, Scene

# CSV schemas: name -> (version, columns)
SCHEMAS = {
    "path": (1, ["index", "obstacle", "x", "y", "flight"]),
    "words": (1, ["length", "word", "primitive", "count"]),
    "orbits": (1, ["word", "T", "m", "r", "lambda", "delta", "residual"]),
    "pressure": (1, ["tau", "memory", "value", "residual"]),
    "s0": (1, ["s0", "memory", "residual"]),
    "sandwich": (1, ["pr_g", "int_f_nu_g", "int_f_nu_0", "s0", "lower", "upper",
                     "margin_lower", "margin_upper", "sign_ok", "ok"]),
    "zeta_eval": (1, ["re", "im", "zeta_re", "zeta_im", "euler_re", "euler_im"]),
    "zeros": (1, ["re", "im", "residual", "stability", "multiplicity"]),
    "front": (1, ["step", "x", "y", "dx", "dy", "curvature", "lambda", "cumulative"]),
    "wkb_series": (1, ["n", "u_re", "u_im", "partial_re", "partial_im", "cauchy"]),
    "thm3": (1, ["n", "u_sum_re", "u_sum_im", "operator_re", "operator_im", "gap",
                 "identity", "res_flight", "res_amp"]),
}


def scene_from_dict(data, allow_eclipse=False):
    if not isinstance(data, dict) or not data.get("obstacles"):
        raise GeometryError("scene has no obstacles")
    return Scene.from_dict(data, check_h=not allow_eclipse)


def load_scene(path, allow_eclipse=False):
    """Read ``{"obstacles": [{"center": [x, y], "radius": r}, ...]}``."""
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GeometryError(f"invalid scene JSON: {exc}") from exc
    return scene_from_dict(data, allow_eclipse)


def scene_to_json(scene):
    return json.dumps(scene.to_dict(), indent=2, sort_keys=True)


def fmt(v):
    """17 significant digits for floats, plain text otherwise."""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return "%.17g" % v
    return str(v)


def csv_text(schema, rows):
    """RFC-4180 CSV text with the schema's header row."""
    cols = SCHEMAS[schema][1]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(cols)
    for row in rows:
        if len(row) != len(cols):
            raise ValueError(f"row has {len(row)} fields, schema {schema} has {len(cols)}")
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def read_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": _jsonable(obj.real), "im": _jsonable(obj.imag)}
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    return obj


def json_text(obj):
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


__all__ = ["SCHEMAS", "load_scene", "scene_from_dict", "scene_to_json", "csv_text",
           "read_csv", "json_text", "fmt"]
