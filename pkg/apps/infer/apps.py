from django.apps import AppConfig


class InferConfig(AppConfig):
    name = "apps.infer"
    verbose_name = "Group map inference"
