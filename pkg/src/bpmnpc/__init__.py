"""Convert BPMN diagrams into Privacy Calculus terms and explore their behaviour."""

__version__ = "0.1.0"
