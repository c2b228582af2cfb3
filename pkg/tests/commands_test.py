'''unit testing code for the python interface to the command line.'''
import math
import unittest

import pytest

import pyinteract.commands
from pyinteract.utils import InteractDispatcher, InteractError


class TestDispatcher(unittest.TestCase):

    def test_summary_is_parsed(self):
        d = pyinteract.commands.summary("--alpha", 2.5)
        self.assertEqual(d["regime"], "A")
        self.assertIsInstance(d["R"], float)

    def test_raw_output(self):
        out = pyinteract.commands.summary("--alpha", 2.5, raw=True)
        self.assertIsInstance(out, str)
        self.assertTrue(out.startswith("{"))

    def test_split_lines(self):
        lines = pyinteract.commands.sweep("--alpha-min", 2.5, "--alpha-max", 2.7,
                                          "--steps", 2, "--interior-points", 5,
                                          "--exterior-points", 10,
                                          raw=True, split_lines=True)
        self.assertEqual(len(lines), 3)
        self.assertEqual(lines[0], "alpha,R,E,second_moment,el_residual")

    def test_sweep_rows(self):
        table = pyinteract.commands.sweep("--alpha-min", 1.0, "--alpha-max", 1.0,
                                          "--steps", 1, "--regime", "B",
                                          "--interior-points", 5, "--exterior-points", 10)
        self.assertEqual(len(table), 1)
        self.assertAlmostEqual(float(table[0]["E"]), -1.0 / 6, places=13)

    def test_solve_csv_parser(self):
        table = pyinteract.commands.solve("--alpha", 2.5, "-n", 4, "--max-iters", 5,
                                          "--format", "csv")
        self.assertEqual(table[0]["method"], "particles")
        d = pyinteract.commands.solve("--alpha", 2.5, "-n", 4, "--max-iters", 5)
        self.assertEqual(d["size"], 4)
        self.assertTrue(math.isfinite(d["energy"]))

    def test_failure_raises(self):
        self.assertRaises(InteractError, pyinteract.commands.summary, "--alpha", 2)
        self.assertRaises(InteractError, pyinteract.commands.verify, "--probe",
                          "--alpha", 2.5, "--trials", 3, "--grid=-1:1:2")

    def test_error_carries_output(self):
        with self.assertRaises(InteractError) as cm:
            pyinteract.commands.summary("--alpha", 2)
        self.assertIn("returned with error 2", str(cm.exception))

    def test_usage(self):
        text = pyinteract.commands.verify.usage()
        self.assertIn("--identity", text)
        self.assertIn("--probe", text)


def test_unknown_subcommand():
    with pytest.raises(InteractError):
        InteractDispatcher("frobnicate")("--alpha", 1)


def test_messages_are_kept():
    dispatcher = InteractDispatcher("summary")
    dispatcher("--alpha", 2.5)
    assert dispatcher.get_messages() == ""


def test_include_directory_holds_sources():
    import os
    import pyinteract
    dirs = pyinteract.get_include()
    assert os.path.exists(os.path.join(dirs[0], "libcpairwise.pyx"))
