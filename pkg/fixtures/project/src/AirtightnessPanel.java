package app.measure;

public class AirtightnessPanel extends Panel {
    public void bind() {
        n50Field.setLabel(i18n.get("measurement.n50"));
        saveButton.setText(i18n.get("common.save"));
    }
}
