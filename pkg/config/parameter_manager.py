import json
from typing import Dict, Any

from .settings import PARAMETERS_FILE


class ParameterManager:
    def __init__(self, params_file: str = None):
        """Initialize the parameter manager with an optional custom parameters file."""
        self.params_file = params_file or PARAMETERS_FILE
        self.params = self._load_parameters()

    def _load_parameters(self) -> Dict[str, Any]:
        """Load parameters from the JSON file."""
        try:
            with open(self.params_file, 'r') as f:
                return json.load(f)
        except FileNotFoundError:
            raise FileNotFoundError(f"Parameters file not found: {self.params_file}")
        except json.JSONDecodeError:
            raise ValueError(f"Invalid JSON format in parameters file: {self.params_file}")

    def get_category_parameters(self, category: str) -> Dict[str, Any]:
        """Get a copy of the parameters for a specific category."""
        if category not in self.params:
            raise ValueError(f"Category not found: {category}")
        return dict(self.params[category])

    def get_parameter(self, category: str, param_name: str) -> Any:
        """Get a single parameter value."""
        category_params = self.get_category_parameters(category)
        if param_name not in category_params:
            raise ValueError(f"Parameter not found in {category}: {param_name}")
        return category_params[param_name]


# Create a default instance
default_manager = ParameterManager()
