from contextlib import contextmanager


class Settings(object):

    defaults = {
        "RTOL": 1e-10,
        "ATOL": 1e-12,
        "GRAZING_COS": 1e-6,
        "SINGULAR_M22": 1e-12,
        "BLOWUP_Q": 1e8,
        "MAX_STEP_FACTOR": 0.1,
        "SERIES_CUTOFF": 1e-6,
        "MMINUS_ZERO": 1e-8,
        "Q_POLE": 1e-8,
        "DESIGN_NODES": 2048,
        "SCAN_NODES": 2048,
        "N_SLICES": 1000,
        "PASS_TOLERANCE": 1e-5,
    }

    def __init__(self):
        self.overrides = {}

    def get_setting(self, key):
        try:
            return self.overrides[key]
        except KeyError:
            return self.defaults.get(key, None)

    @contextmanager
    def override(self, **values):
        """
        Temporarily replace some settings, e.g. for the duration of a CLI run
        or a single test.
        """
        unknown = sorted(set(values) - set(self.defaults))
        if unknown:
            raise KeyError("Unknown settings: {}".format(", ".join(unknown)))

        orig = dict(self.overrides)
        self.overrides.update(values)
        try:
            yield self
        finally:
            self.overrides = orig

    @property
    def RTOL(self):
        return self.get_setting("RTOL")

    @property
    def ATOL(self):
        return self.get_setting("ATOL")

    @property
    def GRAZING_COS(self):
        return self.get_setting("GRAZING_COS")

    @property
    def SINGULAR_M22(self):
        return self.get_setting("SINGULAR_M22")

    @property
    def BLOWUP_Q(self):
        return self.get_setting("BLOWUP_Q")

    @property
    def MAX_STEP_FACTOR(self):
        return self.get_setting("MAX_STEP_FACTOR")

    @property
    def SERIES_CUTOFF(self):
        return self.get_setting("SERIES_CUTOFF")

    @property
    def MMINUS_ZERO(self):
        return self.get_setting("MMINUS_ZERO")

    @property
    def Q_POLE(self):
        return self.get_setting("Q_POLE")

    @property
    def DESIGN_NODES(self):
        return self.get_setting("DESIGN_NODES")

    @property
    def SCAN_NODES(self):
        return self.get_setting("SCAN_NODES")

    @property
    def N_SLICES(self):
        return self.get_setting("N_SLICES")

    @property
    def PASS_TOLERANCE(self):
        return self.get_setting("PASS_TOLERANCE")


solver_settings = Settings()
