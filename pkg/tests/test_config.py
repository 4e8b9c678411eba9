import pytest
from hypothesis import given, strategies as st

from treerepeater.config import (CONFIG_KEYS, ConfigError, HardwareParams, load_config, parse_config_text,
                                 render_config)


def test_defaults_are_table_values():
    flat = HardwareParams().as_flat()
    assert flat == {"t_p_ns": 1.0, "t_e_ns": 10.0, "t_cz_ns": 10.0, "beta": 1.0, "eta_c": 1.0,
                    "eta_w": 0.99, "eta_f": 0.99, "eta_d": 0.98, "l_att_km": 20.0, "eps_r": 1e-5,
                    "t2_s": 1.0}


def test_parse_with_comments_and_blank_lines():
    text = "# gate times\nt_e_ns = 100\n\nt_cz_ns=100  # slow\neta_d = 0.9\n"
    assert parse_config_text(text) == {"t_e_ns": 100.0, "t_cz_ns": 100.0, "eta_d": 0.9}


def test_unknown_key_named():
    with pytest.raises(ConfigError) as err:
        parse_config_text("t_x_ns = 3\n")
    assert err.value.key == "t_x_ns"
    with pytest.raises(ConfigError) as err:
        HardwareParams.from_flat({"bogus": 1.0})
    assert err.value.key == "bogus"


def test_bad_value_named():
    with pytest.raises(ConfigError) as err:
        parse_config_text("eta_w = high\n")
    assert err.value.key == "eta_w"
    for key, value in [("eta_d", 1.5), ("t_cz_ns", -1.0), ("l_att_km", 0.0), ("eps_r", 2.0)]:
        with pytest.raises(ConfigError) as err:
            HardwareParams.from_flat({key: value})
        assert err.value.key == key


def test_missing_equals():
    with pytest.raises(ConfigError):
        parse_config_text("eta_d 0.9\n")


@given(st.dictionaries(st.sampled_from(sorted(CONFIG_KEYS)), st.floats(0.0, 1.0, exclude_min=True)))
def test_render_round_trip(values):
    assert parse_config_text(render_config(values)) == values


def test_load_from_file(tmp_path):
    path = tmp_path / "hw.cfg"
    path.write_text("eps_r = 1e-4\nbeta = 2\n")
    hw = HardwareParams.from_flat(load_config(path))
    assert hw.eps_r == 1e-4 and hw.gates.beta == 2.0 and hw.gates.t_e == 10.0
