import unittest
from unittest.mock import patch
import sys
import os
import json
import tempfile
from pathlib import Path

# Add src to path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '../src')))

from rackhom.config import AppConfig, BudgetConfig, ConfigManager, parse_budget_override
from rackhom.errors import ParseError


class TestConfigManager(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.path = Path(self.tmp.name) / "config.json"

    def tearDown(self):
        self.tmp.cleanup()

    def test_defaults_without_file(self):
        """A missing config file gives the default budgets"""
        manager = ConfigManager(self.path, environ={})
        self.assertEqual(manager.budgets, BudgetConfig())
        self.assertEqual(manager.config.output.format, "text")
        self.assertEqual(manager.config.workers, 1)

    def test_load_nested_and_unknown_fields(self):
        self.path.write_text(json.dumps({
            "budgets": {"max_degree": 4, "shiny": True},
            "output": {"format": "json"},
            "workers": 3,
            "retired_option": 1,
        }))
        config = ConfigManager(self.path, environ={}).config
        self.assertEqual(config.budgets.max_degree, 4)
        self.assertEqual(config.budgets.max_order, BudgetConfig().max_order)
        self.assertEqual(config.output.format, "json")
        self.assertEqual(config.workers, 3)

    def test_corrupt_file_falls_back(self):
        self.path.write_text("{not json")
        self.assertEqual(ConfigManager(self.path, environ={}).config.budgets, BudgetConfig())

    def test_save_round_trip(self):
        manager = ConfigManager(self.path, environ={})
        manager.config.budgets.max_order = 5
        manager.config.log_level = "DEBUG"
        self.assertTrue(manager.save())
        again = ConfigManager(self.path, environ={}).config
        self.assertEqual(again.budgets.max_order, 5)
        self.assertEqual(again.log_level, "DEBUG")

    def test_environment_override(self):
        self.path.write_text(json.dumps({"budgets": {"max_degree": 4}}))
        manager = ConfigManager(self.path, environ={"RACKHOM_BUDGET": "max_order=3, oracle_candidates=10"})
        self.assertEqual(manager.budgets, BudgetConfig(max_degree=4, max_order=3, oracle_candidates=10))

    def test_reads_process_environment(self):
        with patch.dict(os.environ, {"RACKHOM_BUDGET": "max_degree=2"}):
            self.assertEqual(ConfigManager(self.path).budgets.max_degree, 2)


class TestBudgetOverride(unittest.TestCase):
    def test_partial(self):
        budgets = parse_budget_override("max_degree=3", BudgetConfig())
        self.assertEqual(budgets.max_degree, 3)
        self.assertEqual(budgets.max_order, BudgetConfig().max_order)

    def test_empty_parts_ignored(self):
        self.assertEqual(parse_budget_override(",,", BudgetConfig()), BudgetConfig())

    def test_invalid_entries(self):
        for text in ["max_degree", "depth=3", "max_degree=three", "max_order=-1"]:
            with self.assertRaises(ParseError, msg=text):
                parse_budget_override(text, BudgetConfig())

    def test_app_config_defaults(self):
        config = AppConfig()
        self.assertIsInstance(config.budgets, BudgetConfig)
        self.assertEqual(config.log_level, "INFO")


if __name__ == '__main__':
    unittest.main()
