package app.measure;

public class StatusPanel extends Panel {
    public void showOutcome(boolean ok) {
        // key assembled at runtime: invisible to a literal search
        String key = "dynamic.status." + (ok ? "pass" : "fail");
        statusLabel.setText(i18n.get(key));
    }
}
