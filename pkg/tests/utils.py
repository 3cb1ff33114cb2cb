import cmath
import errno
import os
import shutil
from contextlib import contextmanager

from stratscat.slabstack import amplitudes_from_matrix, slab_matrix


@contextmanager
def temporary_path(path):
    ensure_path_does_not_exist(path)
    yield
    ensure_path_does_not_exist(path)


def ensure_path_does_not_exist(path):
    if path.endswith("/"):
        shutil.rmtree(path, ignore_errors=True)
    else:
        try:
            os.unlink(path)
        except OSError as exc:
            if exc.errno != errno.ENOENT:
                raise


def write_file(path, content):
    with open(path, "w") as fp:
        fp.write(content)
    return path


def airy_slab(n, k, ell):
    """
    Left reflection and transmission of a nonmagnetic slab of index ``n`` on
    [0, ell] at normal incidence, from the multiple-beam sum.
    """
    r12 = (1 - n) / (1 + n)
    phase = cmath.exp(2j * n * k * ell)
    r = r12 * (1 - phase) / (1 - r12 ** 2 * phase)
    t = (
        (1 - r12 ** 2)
        * cmath.exp(1j * (n - 1) * k * ell)
        / (1 - r12 ** 2 * phase)
    )
    return r, t


def slab_amplitudes(profile, ctx):
    return amplitudes_from_matrix(
        slab_matrix(profile.eps_value, profile.mu_value, profile.a, profile.ell, ctx)
    )


def relative_error(found, expected):
    scale = max(1.0, max(abs(v) for v in expected))
    return max(abs(a - b) for a, b in zip(found, expected)) / scale
