package app.measure;

public class MeasurePanel extends Panel {
    public void bind() {
        referenceField.setLabel(i18n.get("measurement.pressure.reference"));
        indoorField.setLabel(i18n.get("measurement.pressure.indoor"));
        flowField.setLabel(i18n.get("measurement.airflow.rate"));
    }
}
