import pytest

from usvclust import ParameterError, PipelineConfig
from usvclust.config import build_config, parse_k, parse_tau, read_config_file


class TestParseTau:
    def test_float_passthrough(self):
        assert parse_tau(0.8) == 0.8
        assert parse_tau("0.7") == 0.7
        assert parse_tau(1.0) == 1.0
        assert parse_tau(-0.5) == -0.5

    def test_presets(self):
        assert parse_tau("dba") == 0.8
        assert parse_tau("c57") == 0.7
        assert parse_tau(" DBA ") == 0.8

    def test_out_of_range(self):
        with pytest.raises(ParameterError):
            parse_tau(1.0001)
        with pytest.raises(ParameterError):
            parse_tau(-1.0)

    def test_garbage(self):
        with pytest.raises(ParameterError, match="tau"):
            parse_tau("bl6")


class TestParseK:
    def test_scalar(self):
        assert parse_k(20) == (20,)
        assert parse_k("20") == (20,)

    def test_comma_list(self):
        assert parse_k("20,40,60") == (20, 40, 60)

    def test_sequence(self):
        assert parse_k([5, 10]) == (5, 10)

    def test_garbage(self):
        with pytest.raises(ParameterError):
            parse_k("20;40")


class TestPipelineConfig:
    def test_defaults(self):
        cfg = PipelineConfig(input="a", output_dir="b")
        assert cfg.method == "lasso_ssc"
        assert cfg.k == (20, 40, 60)
        assert cfg.tau == 0.8
        assert cfg.lam == 0.3
        assert cfg.f == 64 and cfg.t == 64
        assert cfg.export_embedding is False

    def test_required_paths(self):
        with pytest.raises(ParameterError, match="input"):
            PipelineConfig(output_dir="b")
        with pytest.raises(ParameterError, match="output_dir"):
            PipelineConfig(input="a")

    def test_bad_method(self):
        with pytest.raises(ParameterError, match="method"):
            PipelineConfig(input="a", output_dir="b", method="dbscan")

    def test_bad_values(self):
        base = dict(input="a", output_dir="b")
        with pytest.raises(ParameterError):
            PipelineConfig(**base, k=0)
        with pytest.raises(ParameterError):
            PipelineConfig(**base, lam=0.0)
        with pytest.raises(ParameterError):
            PipelineConfig(**base, denoise_eps=-0.1)
        with pytest.raises(ParameterError):
            PipelineConfig(**base, f=1)
        with pytest.raises(ParameterError):
            PipelineConfig(**base, tol=0.0)

    def test_k_normalized_to_tuple(self):
        cfg = PipelineConfig(input="a", output_dir="b", k="10,20")
        assert cfg.k == (10, 20)


class TestConfigFile:
    def test_round_trip(self, tmp_path):
        p = tmp_path / "run.cfg"
        p.write_text(
            "# pipeline settings\n"
            "input = data.ssca\n"
            "output_dir = out\n"
            "method = omp_ssc\n"
            "k = 10,20\n"
            "tau = dba\n"
            "lambda = 0.25\n"
            "\n"
            "export_embedding = true\n"
            "seed = 7\n"
        )
        values = read_config_file(p)
        cfg = build_config(values)
        assert cfg.input == "data.ssca"
        assert cfg.method == "omp_ssc"
        assert cfg.k == (10, 20)
        assert cfg.tau == 0.8
        assert cfg.lam == 0.25
        assert cfg.export_embedding is True
        assert cfg.seed == 7

    def test_flags_override_file(self, tmp_path):
        p = tmp_path / "run.cfg"
        p.write_text("input = a\noutput_dir = b\nseed = 7\ntau = 0.5\n")
        cfg = build_config(read_config_file(p), {"seed": 11, "tau": None})
        assert cfg.seed == 11
        assert cfg.tau == 0.5  # None flags fall back to the file value

    def test_unknown_key_points_at_line(self, tmp_path):
        p = tmp_path / "run.cfg"
        p.write_text("input = a\nshrink = 2\n")
        with pytest.raises(ParameterError, match=r":2: unknown key 'shrink'"):
            read_config_file(p)

    def test_missing_equals(self, tmp_path):
        p = tmp_path / "run.cfg"
        p.write_text("just a line\n")
        with pytest.raises(ParameterError, match="key = value"):
            read_config_file(p)

    def test_bad_number(self, tmp_path):
        p = tmp_path / "run.cfg"
        p.write_text("seed = soon\n")
        with pytest.raises(ParameterError, match=r":1: bad value for seed"):
            read_config_file(p)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParameterError, match="not found"):
            read_config_file(tmp_path / "nope.cfg")

    def test_unknown_flag_field_rejected(self):
        with pytest.raises(ParameterError, match="unknown config fields"):
            build_config(None, {"input": "a", "output_dir": "b", "shrink": 2})
